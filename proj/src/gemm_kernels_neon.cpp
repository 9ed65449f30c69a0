#include "rectri/simd.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

// NEON microkernels mirroring the AVX2 tile shapes: f32 16x6 across four
// q-registers per row block, f64 8x6 across four.

namespace rectri::simd::detail {

void microkernel_f32_neon(index_t k, const float* a, const float* b,
                          float* ab) {
  constexpr index_t MR = MicroTile<float>::mr;
  constexpr index_t NR = MicroTile<float>::nr;
  static_assert(MR == 16 && NR == 6);

  float32x4_t acc[NR][4];
  for (int j = 0; j < NR; ++j)
    for (int q = 0; q < 4; ++q) acc[j][q] = vdupq_n_f32(0.0f);

  for (index_t p = 0; p < k; ++p) {
    const float* ap = a + p * MR;
    float32x4_t av[4];
    for (int q = 0; q < 4; ++q) av[q] = vld1q_f32(ap + 4 * q);
    const float* bp = b + p * NR;
    for (int j = 0; j < NR; ++j) {
      const float32x4_t bv = vdupq_n_f32(bp[j]);
      for (int q = 0; q < 4; ++q) acc[j][q] = vfmaq_f32(acc[j][q], av[q], bv);
    }
  }
  for (int j = 0; j < NR; ++j)
    for (int q = 0; q < 4; ++q) vst1q_f32(ab + j * MR + 4 * q, acc[j][q]);
}

void microkernel_f64_neon(index_t k, const double* a, const double* b,
                          double* ab) {
  constexpr index_t MR = MicroTile<double>::mr;
  constexpr index_t NR = MicroTile<double>::nr;
  static_assert(MR == 8 && NR == 6);

  float64x2_t acc[NR][4];
  for (int j = 0; j < NR; ++j)
    for (int q = 0; q < 4; ++q) acc[j][q] = vdupq_n_f64(0.0);

  for (index_t p = 0; p < k; ++p) {
    const double* ap = a + p * MR;
    float64x2_t av[4];
    for (int q = 0; q < 4; ++q) av[q] = vld1q_f64(ap + 2 * q);
    const double* bp = b + p * NR;
    for (int j = 0; j < NR; ++j) {
      const float64x2_t bv = vdupq_n_f64(bp[j]);
      for (int q = 0; q < 4; ++q) acc[j][q] = vfmaq_f64(acc[j][q], av[q], bv);
    }
  }
  for (int j = 0; j < NR; ++j)
    for (int q = 0; q < 4; ++q) vst1q_f64(ab + j * MR + 2 * q, acc[j][q]);
}

}  // namespace rectri::simd::detail

#endif  // aarch64
