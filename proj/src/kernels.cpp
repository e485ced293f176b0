#include "fgc/kernels.hpp"

#include <optional>

#include "fgc/errors.hpp"

namespace fgc {

namespace detail {
extern const KernelOps kScalarOps;
#if defined(FGC_HAVE_AVX2_BUILD)
extern const KernelOps kAvx2Ops;
#endif
}  // namespace detail

namespace {

std::optional<KernelBackend>& forced_backend() {
  static std::optional<KernelBackend> forced;
  return forced;
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

}  // namespace

bool backend_available(KernelBackend backend) {
  if (backend == KernelBackend::scalar) return true;
#if defined(FGC_HAVE_AVX2_BUILD)
  return cpu_has_avx2();
#else
  return false;
#endif
}

KernelBackend active_backend() {
  if (forced_backend()) return *forced_backend();
  return backend_available(KernelBackend::avx2) ? KernelBackend::avx2
                                                : KernelBackend::scalar;
}

const KernelOps& kernels_for(KernelBackend backend) {
#if defined(FGC_HAVE_AVX2_BUILD)
  if (backend == KernelBackend::avx2) return detail::kAvx2Ops;
#else
  if (backend == KernelBackend::avx2) {
    throw ValidationError("AVX2 kernels were not built for this target");
  }
#endif
  return detail::kScalarOps;
}

const KernelOps& kernels() { return kernels_for(active_backend()); }

void force_backend(KernelBackend backend) {
  if (!backend_available(backend)) {
    throw ValidationError(std::string("kernel backend '") + backend_name(backend) +
                          "' is not available on this machine");
  }
  forced_backend() = backend;
}

void reset_backend() { forced_backend().reset(); }

const char* backend_name(KernelBackend backend) {
  return backend == KernelBackend::scalar ? "scalar" : "avx2";
}

}  // namespace fgc
