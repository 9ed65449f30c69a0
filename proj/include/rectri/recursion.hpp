#pragma once

#include <functional>

#include "rectri/backend.hpp"
#include "rectri/base_kernels.hpp"
#include "rectri/flags.hpp"
#include "rectri/gemm.hpp"
#include "rectri/matrix.hpp"

namespace rectri {

// Dimension at or below which the recursive drivers hand off to the base
// kernels.
struct Threshold {
  index_t value = kDefaultTileLimit;
};

// Which diagonal block a recursion step works on.
enum class DiagBlock { A11, A22 };

// Which half of B a GEMM update touches. Halves are rows of B for Left specs
// and columns for Right specs.
enum class BHalf { B1, B2 };

// The GEMM update between the two recursive steps: the single off-diagonal
// block of A (A21 for Lower, A12 for Upper), how it enters the product, which
// B half it reads and which it accumulates into, and the update's sign.
// TRMM updates carry alpha (accumulate = +alpha); TRSM updates subtract with
// unit scaling because alpha was already applied to B at entry.
struct GemmUpdate {
  Trans off_trans = Trans::NoTrans;
  bool off_on_left = true;  // true: off * B_src; false: B_src * off
  BHalf read_half = BHalf::B1;
  BHalf write_half = BHalf::B2;
  double sign = 1.0;
  bool carries_alpha = false;
};

// Per-variant plan: which diagonal block first, the GEMM update, which block
// second. Ordered so every GEMM reads only halves that still hold their
// pre-update values.
struct RecursionSchema {
  DiagBlock first_block;
  GemmUpdate update;
  DiagBlock second_block;
};

enum class OpKind { Trmm, Trsm };

constexpr std::string_view to_string(OpKind op) {
  return op == OpKind::Trmm ? "trmm" : "trsm";
}
OpKind parse_op_kind(std::string_view s);

// Total over all 16 variants of each operation; ConjTrans is reduced to
// Trans before lookup.
RecursionSchema schema_for(OpKind op, const TriangularSpec& spec);

// Instrumentation events emitted by the recursive drivers, one per GEMM
// update and one per base-kernel call, with the call's output dimensions.
enum class RecEvent { Gemm, BaseTrmm, BaseTrsm };

using EventSink = std::function<void(RecEvent, index_t n, index_t m)>;

// B <- alpha * op(A) * B (Left) or alpha * B * op(A) (Right), recursively:
// split at floor(n/2), run the first diagonal block, apply the GEMM update,
// run the second. At or below the threshold the call is exactly one base
// kernel. Alpha rides down with the triangular subcalls and the GEMM updates,
// so each term of the result is scaled exactly once.
template <typename T>
void rec_trmm(const TriangularSpec& spec, MatrixView<const T> A,
              MatrixView<T> B, Threshold threshold = {},
              const Backend& backend = Backend::seq(),
              const EventSink& sink = {});

// Solves op(A) * X = alpha * B (Left) or X * op(A) = alpha * B (Right) and
// stores X in B. Alpha is applied once, by scaling B at entry; the whole
// recursion then runs with alpha = 1. Singularity errors from base kernels
// are rethrown with the zero pivot's global row index in A. B's contents are
// unspecified after a singularity error.
template <typename T>
void rec_trsm(const TriangularSpec& spec, MatrixView<const T> A,
              MatrixView<T> B, Threshold threshold = {},
              const Backend& backend = Backend::seq(),
              const EventSink& sink = {});

}  // namespace rectri
