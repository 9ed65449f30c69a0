#include "rectri/flags.hpp"

namespace rectri {

Side parse_side(std::string_view s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw ConfigError("unknown side '" + std::string(s) + "' (left|right)");
}

Uplo parse_uplo(std::string_view s) {
  if (s == "lower") return Uplo::Lower;
  if (s == "upper") return Uplo::Upper;
  throw ConfigError("unknown uplo '" + std::string(s) + "' (lower|upper)");
}

Trans parse_trans(std::string_view s) {
  if (s == "n") return Trans::NoTrans;
  if (s == "t") return Trans::Trans;
  if (s == "c") return Trans::ConjTrans;
  throw ConfigError("unknown trans '" + std::string(s) + "' (n|t|c)");
}

Diag parse_diag(std::string_view s) {
  if (s == "unit") return Diag::Unit;
  if (s == "nonunit") return Diag::NonUnit;
  throw ConfigError("unknown diag '" + std::string(s) + "' (unit|nonunit)");
}

std::string variant_string(const TriangularSpec& spec) {
  std::string out;
  out += to_string(spec.side);
  out += '-';
  out += to_string(spec.uplo);
  out += '-';
  out += to_string(spec.trans);
  out += '-';
  out += to_string(spec.diag);
  return out;
}

}  // namespace rectri
