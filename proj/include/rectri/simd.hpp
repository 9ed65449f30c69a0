#pragma once

#include "rectri/common.hpp"

namespace rectri::simd {

// Instruction sets the GEMM microkernels are built for. Scalar is the
// reference; the others are selected at runtime when the host supports them.
enum class Isa { Scalar, Avx2, Neon };

constexpr const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    default: return "scalar";
  }
}

// Best ISA the host supports (cached probe). Honors the RECTRI_ISA
// environment variable (scalar|avx2|neon) when set to a supported value.
Isa detected_isa();

// Currently selected ISA; defaults to detected_isa().
Isa active_isa();

// Overrides the selection, e.g. to pin the scalar reference in equivalence
// tests. Throws ConfigError if the host cannot run `isa`.
void set_active_isa(Isa isa);

bool host_supports(Isa isa);

// Register tile shape shared by every microkernel of one element type, so
// packing and edge handling are ISA-independent and all ISAs accumulate in
// the same order.
template <typename T>
struct MicroTile;

template <>
struct MicroTile<float> {
  static constexpr index_t mr = 16;
  static constexpr index_t nr = 6;
};

template <>
struct MicroTile<double> {
  static constexpr index_t mr = 8;
  static constexpr index_t nr = 6;
};

// Computes ab[j*mr + i] = sum_k a_panel[k*mr + i] * b_panel[k*nr + j] with a
// single rounding per accumulation step (fma). Panels are packed and padded
// to mr/nr by the caller; k >= 1.
template <typename T>
using Microkernel = void (*)(index_t k, const T* a_panel, const T* b_panel,
                             T* ab);

Microkernel<float> microkernel_f32(Isa isa);
Microkernel<double> microkernel_f64(Isa isa);

template <typename T>
Microkernel<T> microkernel(Isa isa);

template <>
inline Microkernel<float> microkernel<float>(Isa isa) {
  return microkernel_f32(isa);
}
template <>
inline Microkernel<double> microkernel<double>(Isa isa) {
  return microkernel_f64(isa);
}

namespace detail {
void microkernel_f32_scalar(index_t k, const float* a, const float* b,
                            float* ab);
void microkernel_f64_scalar(index_t k, const double* a, const double* b,
                            double* ab);
#if defined(__x86_64__) || defined(_M_X64)
void microkernel_f32_avx2(index_t k, const float* a, const float* b, float* ab);
void microkernel_f64_avx2(index_t k, const double* a, const double* b,
                          double* ab);
#endif
#if defined(__aarch64__)
void microkernel_f32_neon(index_t k, const float* a, const float* b, float* ab);
void microkernel_f64_neon(index_t k, const double* a, const double* b,
                          double* ab);
#endif
}  // namespace detail

}  // namespace rectri::simd
