#pragma once

#include "rectri/flags.hpp"
#include "rectri/matrix.hpp"
#include "rectri/recursion.hpp"

namespace rectri::oracle {

// Brute-force references for TRMM and TRSM. Deterministic, single-threaded,
// and independent of the gemm/kernels/recursion code paths: naive loops over
// a densely materialized triangle, always in double precision.

// Dense n x n matrix built from (A, uplo, diag): the stored triangle copied,
// the opposite strict triangle set to zero (never read), and the diagonal
// forced to 1 for Unit. Pure; A is not modified.
template <typename T>
MatrixBuffer<double> materialize_triangle(MatrixView<const T> A, Uplo uplo,
                                          Diag diag);

// alpha * op(materialize(A)) * B, or the Right-side form, via naive triple
// loop in double precision.
template <typename T>
MatrixBuffer<double> oracle_trmm(const TriangularSpec& spec,
                                 MatrixView<const T> A, MatrixView<const T> B);

// Column-by-column sequential forward/back substitution in double precision.
// Throws SingularityError if the materialized diagonal has an exact zero.
template <typename T>
MatrixBuffer<double> oracle_trsm(const TriangularSpec& spec,
                                 MatrixView<const T> A, MatrixView<const T> B);

}  // namespace rectri::oracle
