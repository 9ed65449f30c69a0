#include "rectri/gemm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "rectri/simd.hpp"

namespace rectri {

namespace {

using simd::MicroTile;

template <typename T>
T op_elem(Trans t, const MatrixView<const T>& M, index_t r, index_t c) {
  return t == Trans::NoTrans ? M(r, c) : M(c, r);
}

// Packs an mcb x kcb block of op(A) into row panels of MR, zero-padded, laid
// out so the microkernel streams one MR column per k step.
template <typename T>
void pack_a(Trans ta, const MatrixView<const T>& A, index_t ic, index_t pc,
            index_t mcb, index_t kcb, T* dst) {
  constexpr index_t MR = MicroTile<T>::mr;
  for (index_t ip = 0; ip * MR < mcb; ++ip) {
    const index_t rows = std::min(MR, mcb - ip * MR);
    T* panel = dst + ip * MR * kcb;
    for (index_t p = 0; p < kcb; ++p) {
      T* col = panel + p * MR;
      for (index_t i = 0; i < rows; ++i)
        col[i] = op_elem(ta, A, ic + ip * MR + i, pc + p);
      for (index_t i = rows; i < MR; ++i) col[i] = T{};
    }
  }
}

// Packs a kcb x ncb block of op(B) into column panels of NR, zero-padded.
template <typename T>
void pack_b(Trans tb, const MatrixView<const T>& B, index_t pc, index_t jc,
            index_t kcb, index_t ncb, T* dst) {
  constexpr index_t NR = MicroTile<T>::nr;
  for (index_t jp = 0; jp * NR < ncb; ++jp) {
    const index_t cols = std::min(NR, ncb - jp * NR);
    T* panel = dst + jp * NR * kcb;
    for (index_t p = 0; p < kcb; ++p) {
      T* row = panel + p * NR;
      for (index_t j = 0; j < cols; ++j)
        row[j] = op_elem(tb, B, pc + p, jc + jp * NR + j);
      for (index_t j = cols; j < NR; ++j) row[j] = T{};
    }
  }
}

// Merges one microkernel tile into C. The first k block applies beta (with
// the BLAS beta == 0 no-read convention); later blocks accumulate. Explicit
// fma keeps the rounding sequence identical across ISAs and build flags.
template <typename T>
void write_tile(T alpha, const T* ab, T beta, bool first_k, T* c, index_t ldc,
                index_t rows, index_t cols) {
  constexpr index_t MR = MicroTile<T>::mr;
  for (index_t j = 0; j < cols; ++j) {
    T* col = c + j * ldc;
    const T* abj = ab + j * MR;
    if (!first_k) {
      for (index_t i = 0; i < rows; ++i)
        col[i] = std::fma(alpha, abj[i], col[i]);
    } else if (beta == T{}) {
      for (index_t i = 0; i < rows; ++i) col[i] = alpha * abj[i];
    } else {
      for (index_t i = 0; i < rows; ++i) {
        const T scaled = beta * col[i];
        col[i] = std::fma(alpha, abj[i], scaled);
      }
    }
  }
}

template <typename T>
void gemm_columns(T alpha, Trans ta, const MatrixView<const T>& A, Trans tb,
                  const MatrixView<const T>& B, T beta, const MatrixView<T>& C,
                  const GemmBlocking& blocking, index_t j0, index_t j1,
                  simd::Microkernel<T> kernel) {
  constexpr index_t MR = MicroTile<T>::mr;
  constexpr index_t NR = MicroTile<T>::nr;
  const index_t M = C.rows();
  const index_t K = ta == Trans::NoTrans ? A.cols() : A.rows();
  const index_t mc = blocking.mc;
  const index_t kc = blocking.kc;
  const index_t nc = blocking.nc;

  std::vector<T> packed_a(static_cast<std::size_t>((mc + MR - 1) / MR * MR) *
                          kc);
  std::vector<T> packed_b(static_cast<std::size_t>((nc + NR - 1) / NR * NR) *
                          kc);
  alignas(64) T ab[MR * NR];

  T* cbase = C.data();
  const index_t ldc = C.leading_dim();

  for (index_t jc = j0; jc < j1; jc += nc) {
    const index_t ncb = std::min(nc, j1 - jc);
    for (index_t pc = 0; pc < K; pc += kc) {
      const index_t kcb = std::min(kc, K - pc);
      pack_b(tb, B, pc, jc, kcb, ncb, packed_b.data());
      const bool first_k = pc == 0;
      for (index_t ic = 0; ic < M; ic += mc) {
        const index_t mcb = std::min(mc, M - ic);
        pack_a(ta, A, ic, pc, mcb, kcb, packed_a.data());
        for (index_t jp = 0; jp * NR < ncb; ++jp) {
          const index_t cols = std::min(NR, ncb - jp * NR);
          for (index_t ip = 0; ip * MR < mcb; ++ip) {
            const index_t rows = std::min(MR, mcb - ip * MR);
            kernel(kcb, packed_a.data() + ip * MR * kcb,
                   packed_b.data() + jp * NR * kcb, ab);
            write_tile(alpha, ab, beta, first_k,
                       cbase + (jc + jp * NR) * ldc + ic + ip * MR, ldc, rows,
                       cols);
          }
        }
      }
    }
  }
}

// beta-only path for alpha == 0 or k == 0.
template <typename T>
void apply_beta(T beta, const MatrixView<T>& C) {
  if (beta == T{1}) return;
  T* base = C.data();
  const index_t ld = C.leading_dim();
  for (index_t j = 0; j < C.cols(); ++j) {
    T* col = base + j * ld;
    if (beta == T{}) {
      for (index_t i = 0; i < C.rows(); ++i) col[i] = T{};
    } else {
      for (index_t i = 0; i < C.rows(); ++i) col[i] *= beta;
    }
  }
}

}  // namespace

Backend Backend::par(int width) {
  Backend b;
  b.name = "par";
  b.parallel_width =
      width > 0 ? width
                : std::max(1u, std::thread::hardware_concurrency());
  return b;
}

template <typename T>
void gemm(T alpha, Trans trans_a, MatrixView<const T> A, Trans trans_b,
          MatrixView<const T> B, T beta, MatrixView<T> C,
          const Backend& backend) {
  validate(backend);
  const ElemKind kind = elem_kind_of<T>::value;
  const Trans ta = effective_op(trans_a, kind);
  const Trans tb = effective_op(trans_b, kind);

  const index_t M = C.rows();
  const index_t N = C.cols();
  const index_t K = ta == Trans::NoTrans ? A.cols() : A.rows();
  const index_t a_rows = ta == Trans::NoTrans ? A.rows() : A.cols();
  const index_t b_rows = tb == Trans::NoTrans ? B.rows() : B.cols();
  const index_t b_cols = tb == Trans::NoTrans ? B.cols() : B.rows();
  if (a_rows != M || b_rows != K || b_cols != N)
    throw ShapeError("gemm: op(A) is " + std::to_string(a_rows) + "x" +
                     std::to_string(K) + ", op(B) is " + std::to_string(b_rows) +
                     "x" + std::to_string(b_cols) + ", C is " +
                     std::to_string(M) + "x" + std::to_string(N));
  if (overlaps(C, A) || overlaps(C, B))
    throw AliasError("gemm: C overlaps an input view");

  if (M == 0 || N == 0) return;
  if (alpha == T{} || K == 0) {
    apply_beta(beta, C);
    return;
  }

  const simd::Microkernel<T> kernel = simd::microkernel<T>(simd::active_isa());
  const int workers =
      static_cast<int>(std::min<index_t>(backend.parallel_width, N));
  if (workers <= 1) {
    gemm_columns(alpha, ta, A, tb, B, beta, C, backend.blocking, 0, N, kernel);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) {
    const index_t j0 = N * w / workers;
    const index_t j1 = N * (w + 1) / workers;
    pool.emplace_back([&, w, j0, j1] {
      try {
        gemm_columns(alpha, ta, A, tb, B, beta, C, backend.blocking, j0, j1,
                     kernel);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  try {
    gemm_columns(alpha, ta, A, tb, B, beta, C, backend.blocking, 0, N / workers,
                 kernel);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

template <typename T>
void scale(T alpha, MatrixView<T> B) {
  if (alpha == T{1}) return;
  T* base = B.data();
  const index_t ld = B.leading_dim();
  for (index_t j = 0; j < B.cols(); ++j) {
    T* col = base + j * ld;
    for (index_t i = 0; i < B.rows(); ++i) col[i] *= alpha;
  }
}

template void gemm<float>(float, Trans, MatrixView<const float>, Trans,
                          MatrixView<const float>, float, MatrixView<float>,
                          const Backend&);
template void gemm<double>(double, Trans, MatrixView<const double>, Trans,
                           MatrixView<const double>, double, MatrixView<double>,
                           const Backend&);
template void scale<float>(float, MatrixView<float>);
template void scale<double>(double, MatrixView<double>);

}  // namespace rectri
