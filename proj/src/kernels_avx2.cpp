// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "fgc/kernels.hpp"

namespace fgc {
namespace detail {

namespace {

std::size_t match_count_i32_avx2(const std::int32_t* a, const std::int32_t* b,
                                 std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    __m256i eq = _mm256_cmpeq_epi32(va, vb);
    int mask = _mm256_movemask_ps(_mm256_castsi256_ps(eq));
    count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i) count += a[i] == b[i] ? 1 : 0;
  return count;
}

// Accumulators mirror the scalar stripes: lo carries lanes 0..3, hi 4..7.
void store_lanes(__m256d lo, __m256d hi, double lane[8]) {
  _mm256_storeu_pd(lane, lo);
  _mm256_storeu_pd(lane + 4, hi);
}

double reduce_lanes(const double lane[8]) {
  double s = lane[0];
  for (int l = 1; l < 8; ++l) s += lane[l];
  return s;
}

double sum_f32_avx2(const float* v, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 x = _mm256_loadu_ps(v + i);
    lo = _mm256_add_pd(lo, _mm256_cvtps_pd(_mm256_castps256_ps128(x)));
    hi = _mm256_add_pd(hi, _mm256_cvtps_pd(_mm256_extractf128_ps(x, 1)));
  }
  double lane[8];
  store_lanes(lo, hi, lane);
  for (int l = 0; i < n; ++i, ++l) lane[l] += static_cast<double>(v[i]);
  return reduce_lanes(lane);
}

double sum_pos_diff_f32_avx2(const float* a, const float* b, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 va = _mm256_loadu_ps(a + i);
    __m256 vb = _mm256_loadu_ps(b + i);
    // max(d, 0) with d as the first operand matches the scalar
    // `d > 0 ? d : 0` for every finite input including signed zeros.
    __m256 d = _mm256_max_ps(_mm256_sub_ps(va, vb), zero);
    lo = _mm256_add_pd(lo, _mm256_cvtps_pd(_mm256_castps256_ps128(d)));
    hi = _mm256_add_pd(hi, _mm256_cvtps_pd(_mm256_extractf128_ps(d, 1)));
  }
  double lane[8];
  store_lanes(lo, hi, lane);
  for (int l = 0; i < n; ++i, ++l) {
    float d = a[i] - b[i];
    lane[l] += static_cast<double>(d > 0.0f ? d : 0.0f);
  }
  return reduce_lanes(lane);
}

}  // namespace

extern const KernelOps kAvx2Ops = {
    match_count_i32_avx2,
    sum_f32_avx2,
    sum_pos_diff_f32_avx2,
};

}  // namespace detail
}  // namespace fgc
