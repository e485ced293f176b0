#pragma once

#include <cstddef>
#include <cstdint>

namespace fgc {

// Hot-loop primitives behind a runtime-dispatched table. The scalar versions
// are the reference; the AVX2 versions must produce bitwise-identical
// results. Float sums use eight double stripes (lane l accumulates elements
// l, l+8, l+16, ...) reduced left to right, so the accumulation order is the
// same no matter which backend ran.
struct KernelOps {
  // Count of positions where a[i] == b[i].
  std::size_t (*match_count_i32)(const std::int32_t* a, const std::int32_t* b,
                                 std::size_t n);
  // Sum of v[i], striped as above.
  double (*sum_f32)(const float* v, std::size_t n);
  // Sum of (a[i] - b[i] > 0 ? a[i] - b[i] : 0), subtraction in float.
  double (*sum_pos_diff_f32)(const float* a, const float* b, std::size_t n);
};

enum class KernelBackend { scalar, avx2 };

// Backend in effect: forced one if set, else AVX2 when the CPU supports it.
KernelBackend active_backend();
const KernelOps& kernels();
const KernelOps& kernels_for(KernelBackend backend);

// Test hooks. force_backend throws ValidationError if the backend is
// unavailable on this machine/build.
void force_backend(KernelBackend backend);
void reset_backend();
bool backend_available(KernelBackend backend);

const char* backend_name(KernelBackend backend);

}  // namespace fgc
