#pragma once

#include "rectri/backend.hpp"
#include "rectri/flags.hpp"
#include "rectri/matrix.hpp"

namespace rectri {

// C <- alpha * op(A) * op(B) + beta * C.
//
// Shapes: op(A) is rows(C) x k, op(B) is k x cols(C). C must be disjoint from
// A and B. Per BLAS convention beta == 0 means C is written, not read, and
// alpha == 0 skips the product entirely.
//
// The parallel backend partitions C's columns across workers; every worker
// accumulates each entry in the same order as the sequential backend, so
// results are identical for a given blocking regardless of width.
template <typename T>
void gemm(T alpha, Trans trans_a, MatrixView<const T> A, Trans trans_b,
          MatrixView<const T> B, T beta, MatrixView<T> C,
          const Backend& backend = Backend::seq());

// op only on the first operand.
template <typename T>
void gemm(T alpha, Trans trans_a, MatrixView<const T> A, MatrixView<const T> B,
          T beta, MatrixView<T> C, const Backend& backend = Backend::seq()) {
  gemm(alpha, trans_a, A, Trans::NoTrans, B, beta, C, backend);
}

// B <- alpha * B, elementwise. Plain IEEE multiply: alpha == 0 is not
// guaranteed to clear non-finite entries (0 * NaN == NaN).
template <typename T>
void scale(T alpha, MatrixView<T> B);

}  // namespace rectri
