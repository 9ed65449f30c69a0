#include "rectri/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// AVX2+FMA microkernels. f32 tile is 16x6 (two ymm rows of 8 lanes), f64 is
// 8x6 (two ymm rows of 4 lanes): 12 accumulator registers, 2 A loads and one
// B broadcast live per k step.

namespace rectri::simd::detail {

void microkernel_f32_avx2(index_t k, const float* a, const float* b,
                          float* ab) {
  constexpr index_t MR = MicroTile<float>::mr;
  constexpr index_t NR = MicroTile<float>::nr;
  static_assert(MR == 16 && NR == 6);

  __m256 acc_lo[NR];
  __m256 acc_hi[NR];
  for (int j = 0; j < NR; ++j) {
    acc_lo[j] = _mm256_setzero_ps();
    acc_hi[j] = _mm256_setzero_ps();
  }
  for (index_t p = 0; p < k; ++p) {
    const __m256 a_lo = _mm256_loadu_ps(a + p * MR);
    const __m256 a_hi = _mm256_loadu_ps(a + p * MR + 8);
    const float* bp = b + p * NR;
    for (int j = 0; j < NR; ++j) {
      const __m256 bv = _mm256_broadcast_ss(bp + j);
      acc_lo[j] = _mm256_fmadd_ps(a_lo, bv, acc_lo[j]);
      acc_hi[j] = _mm256_fmadd_ps(a_hi, bv, acc_hi[j]);
    }
  }
  for (int j = 0; j < NR; ++j) {
    _mm256_storeu_ps(ab + j * MR, acc_lo[j]);
    _mm256_storeu_ps(ab + j * MR + 8, acc_hi[j]);
  }
}

void microkernel_f64_avx2(index_t k, const double* a, const double* b,
                          double* ab) {
  constexpr index_t MR = MicroTile<double>::mr;
  constexpr index_t NR = MicroTile<double>::nr;
  static_assert(MR == 8 && NR == 6);

  __m256d acc_lo[NR];
  __m256d acc_hi[NR];
  for (int j = 0; j < NR; ++j) {
    acc_lo[j] = _mm256_setzero_pd();
    acc_hi[j] = _mm256_setzero_pd();
  }
  for (index_t p = 0; p < k; ++p) {
    const __m256d a_lo = _mm256_loadu_pd(a + p * MR);
    const __m256d a_hi = _mm256_loadu_pd(a + p * MR + 4);
    const double* bp = b + p * NR;
    for (int j = 0; j < NR; ++j) {
      const __m256d bv = _mm256_broadcast_sd(bp + j);
      acc_lo[j] = _mm256_fmadd_pd(a_lo, bv, acc_lo[j]);
      acc_hi[j] = _mm256_fmadd_pd(a_hi, bv, acc_hi[j]);
    }
  }
  for (int j = 0; j < NR; ++j) {
    _mm256_storeu_pd(ab + j * MR, acc_lo[j]);
    _mm256_storeu_pd(ab + j * MR + 4, acc_hi[j]);
  }
}

}  // namespace rectri::simd::detail

#endif  // x86_64
