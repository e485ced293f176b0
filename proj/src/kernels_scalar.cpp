#include "fgc/kernels.hpp"

namespace fgc {
namespace detail {

namespace {

std::size_t match_count_i32_scalar(const std::int32_t* a, const std::int32_t* b,
                                   std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += a[i] == b[i] ? 1 : 0;
  return count;
}

double reduce_lanes(const double lane[8]) {
  double s = lane[0];
  for (int l = 1; l < 8; ++l) s += lane[l];
  return s;
}

double sum_f32_scalar(const float* v, std::size_t n) {
  double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int l = 0; l < 8; ++l) lane[l] += static_cast<double>(v[i + l]);
  }
  for (int l = 0; i < n; ++i, ++l) lane[l] += static_cast<double>(v[i]);
  return reduce_lanes(lane);
}

double sum_pos_diff_f32_scalar(const float* a, const float* b, std::size_t n) {
  double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int l = 0; l < 8; ++l) {
      float d = a[i + l] - b[i + l];
      lane[l] += static_cast<double>(d > 0.0f ? d : 0.0f);
    }
  }
  for (int l = 0; i < n; ++i, ++l) {
    float d = a[i] - b[i];
    lane[l] += static_cast<double>(d > 0.0f ? d : 0.0f);
  }
  return reduce_lanes(lane);
}

}  // namespace

extern const KernelOps kScalarOps = {
    match_count_i32_scalar,
    sum_f32_scalar,
    sum_pos_diff_f32_scalar,
};

}  // namespace detail
}  // namespace fgc
