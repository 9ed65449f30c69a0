#pragma once

#include <cstdint>

namespace rectri {

using index_t = std::int64_t;

// Element kinds supported by the library. Both are real; complex storage is
// not provided and ConjTrans reduces to Trans (see flags.hpp).
enum class ElemKind { F32, F64 };

constexpr bool is_real(ElemKind) { return true; }

template <typename T>
struct elem_kind_of;

template <>
struct elem_kind_of<float> {
  static constexpr ElemKind value = ElemKind::F32;
};

template <>
struct elem_kind_of<double> {
  static constexpr ElemKind value = ElemKind::F64;
};

constexpr const char* elem_kind_name(ElemKind k) {
  return k == ElemKind::F32 ? "f32" : "f64";
}

}  // namespace rectri
