#include "rectri/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "rectri/error.hpp"

namespace rectri::simd {

namespace {

bool probe_host(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect() {
  if (const char* env = std::getenv("RECTRI_ISA")) {
    const std::string want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == isa_name(isa) && probe_host(isa)) return isa;
    }
  }
  if (probe_host(Isa::Avx2)) return Isa::Avx2;
  if (probe_host(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detect()};
  return slot;
}

}  // namespace

bool host_supports(Isa isa) { return probe_host(isa); }

Isa detected_isa() {
  static const Isa detected = detect();
  return detected;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!probe_host(isa))
    throw ConfigError(std::string("isa '") + isa_name(isa) +
                      "' not supported on this host");
  active_slot().store(isa, std::memory_order_relaxed);
}

Microkernel<float> microkernel_f32(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2:
      return detail::microkernel_f32_avx2;
#endif
#if defined(__aarch64__)
    case Isa::Neon:
      return detail::microkernel_f32_neon;
#endif
    default:
      return detail::microkernel_f32_scalar;
  }
}

Microkernel<double> microkernel_f64(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2:
      return detail::microkernel_f64_avx2;
#endif
#if defined(__aarch64__)
    case Isa::Neon:
      return detail::microkernel_f64_neon;
#endif
    default:
      return detail::microkernel_f64_scalar;
  }
}

}  // namespace rectri::simd
