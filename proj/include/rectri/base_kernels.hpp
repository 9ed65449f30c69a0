#pragma once

#include "rectri/backend.hpp"
#include "rectri/flags.hpp"
#include "rectri/matrix.hpp"

namespace rectri {

// Largest tile the base kernels accept unless the caller raises the limit.
inline constexpr index_t kDefaultTileLimit = 256;

// B <- alpha * op(A) * B (Left) or alpha * B * op(A) (Right), in place, with
// A read only through the triangle selected by uplo and the diag rule.
// Throws TileLimitError when A is larger than tile_limit.
template <typename T>
void trmm_base(const TriangularSpec& spec, MatrixView<const T> A,
               MatrixView<T> B, index_t tile_limit = kDefaultTileLimit,
               const Backend& backend = Backend::seq());

// Solves op(A) * X = alpha * B (Left) or X * op(A) = alpha * B (Right) and
// stores X in B. Matches the phase-synchronized formulation of the workgroup
// program bit for bit: each right-hand-side column is normalized by the
// diagonal up front and then updated one resolved row at a time.
//
// NonUnit tiles are scanned for exactly-zero diagonal entries before B is
// touched; the error index is tile-local.
template <typename T>
void trsm_base(const TriangularSpec& spec, MatrixView<const T> A,
               MatrixView<T> B, index_t tile_limit = kDefaultTileLimit,
               const Backend& backend = Backend::seq());

}  // namespace rectri
