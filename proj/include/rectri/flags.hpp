#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "rectri/common.hpp"
#include "rectri/error.hpp"

namespace rectri {

// Whether the triangular factor multiplies from the left (op(A)*B) or the
// right (B*op(A)).
enum class Side { Left, Right };

// Which triangle of A holds the stored entries. Entries strictly on the other
// side are never read.
enum class Uplo { Lower, Upper };

// op(A) selector. ConjTrans behaves exactly like Trans on real element kinds.
enum class Trans { NoTrans, Trans, ConjTrans };

// Unit means the diagonal of A is implicitly 1 and its stored values are
// never read.
enum class Diag { NonUnit, Unit };

// Descriptor of one TRMM/TRSM problem family: which of the flag combinations
// is being solved and the scalar applied to B.
struct TriangularSpec {
  Side side = Side::Left;
  Uplo uplo = Uplo::Lower;
  Trans trans = Trans::NoTrans;
  Diag diag = Diag::NonUnit;
  double alpha = 1.0;
};

// Reduces ConjTrans to Trans on real element kinds; identity otherwise.
constexpr Trans effective_op(Trans trans, ElemKind kind) {
  if (trans == Trans::ConjTrans && is_real(kind)) return Trans::Trans;
  return trans;
}

constexpr Trans effective_op(const TriangularSpec& spec, ElemKind kind) {
  return effective_op(spec.trans, kind);
}

inline void validate(const TriangularSpec& spec) {
  if (!std::isfinite(spec.alpha)) throw ConfigError("alpha must be finite");
}

// Flag spellings fixed for the CLI and the variant column of bench CSVs.
constexpr std::string_view to_string(Side s) {
  return s == Side::Left ? "left" : "right";
}
constexpr std::string_view to_string(Uplo u) {
  return u == Uplo::Lower ? "lower" : "upper";
}
constexpr std::string_view to_string(Trans t) {
  switch (t) {
    case Trans::NoTrans: return "n";
    case Trans::Trans: return "t";
    default: return "c";
  }
}
constexpr std::string_view to_string(Diag d) {
  return d == Diag::NonUnit ? "nonunit" : "unit";
}

Side parse_side(std::string_view s);
Uplo parse_uplo(std::string_view s);
Trans parse_trans(std::string_view s);
Diag parse_diag(std::string_view s);

// "left-lower-n-nonunit" style key used by the bench CSVs.
std::string variant_string(const TriangularSpec& spec);

}  // namespace rectri
