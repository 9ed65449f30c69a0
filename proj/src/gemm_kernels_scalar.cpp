#include <cmath>

#include "rectri/simd.hpp"

// Reference microkernels. Same register-tile shape and accumulation order as
// the SIMD variants, with std::fma standing in for the vector fma, so every
// ISA produces bit-identical panels.

namespace rectri::simd::detail {

void microkernel_f32_scalar(index_t k, const float* a, const float* b,
                            float* ab) {
  constexpr index_t MR = MicroTile<float>::mr;
  constexpr index_t NR = MicroTile<float>::nr;
  float acc[MR * NR] = {};
  for (index_t p = 0; p < k; ++p) {
    const float* ap = a + p * MR;
    const float* bp = b + p * NR;
    for (index_t j = 0; j < NR; ++j) {
      const float bv = bp[j];
      for (index_t i = 0; i < MR; ++i) {
        acc[j * MR + i] = std::fma(ap[i], bv, acc[j * MR + i]);
      }
    }
  }
  for (index_t x = 0; x < MR * NR; ++x) ab[x] = acc[x];
}

void microkernel_f64_scalar(index_t k, const double* a, const double* b,
                            double* ab) {
  constexpr index_t MR = MicroTile<double>::mr;
  constexpr index_t NR = MicroTile<double>::nr;
  double acc[MR * NR] = {};
  for (index_t p = 0; p < k; ++p) {
    const double* ap = a + p * MR;
    const double* bp = b + p * NR;
    for (index_t j = 0; j < NR; ++j) {
      const double bv = bp[j];
      for (index_t i = 0; i < MR; ++i) {
        acc[j * MR + i] = std::fma(ap[i], bv, acc[j * MR + i]);
      }
    }
  }
  for (index_t x = 0; x < MR * NR; ++x) ab[x] = acc[x];
}

}  // namespace rectri::simd::detail
