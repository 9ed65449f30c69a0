#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rectri/flags.hpp"
#include "test_support.hpp"

using namespace rectri;

TEST_CASE("effective_op reduces ConjTrans on real kinds") {
  CHECK(effective_op(Trans::ConjTrans, ElemKind::F32) == Trans::Trans);
  CHECK(effective_op(Trans::ConjTrans, ElemKind::F64) == Trans::Trans);
  CHECK(effective_op(Trans::Trans, ElemKind::F32) == Trans::Trans);
  CHECK(effective_op(Trans::NoTrans, ElemKind::F64) == Trans::NoTrans);
}

TEST_CASE("flag spellings round-trip") {
  CHECK(parse_side("left") == Side::Left);
  CHECK(parse_side("right") == Side::Right);
  CHECK(parse_uplo("lower") == Uplo::Lower);
  CHECK(parse_uplo("upper") == Uplo::Upper);
  CHECK(parse_trans("n") == Trans::NoTrans);
  CHECK(parse_trans("t") == Trans::Trans);
  CHECK(parse_trans("c") == Trans::ConjTrans);
  CHECK(parse_diag("unit") == Diag::Unit);
  CHECK(parse_diag("nonunit") == Diag::NonUnit);

  CHECK_THROWS_AS(parse_side("middle"), ConfigError);
  CHECK_THROWS_AS(parse_trans("x"), ConfigError);

  const TriangularSpec spec = testing::make_spec(
      Side::Right, Uplo::Upper, Trans::ConjTrans, Diag::Unit);
  CHECK(variant_string(spec) == "right-upper-c-unit");
}

TEST_CASE("sixteen distinct variants after real reduction") {
  std::set<std::string> keys;
  for (const TriangularSpec& spec : testing::all_variants(1.0, true)) {
    TriangularSpec reduced = spec;
    reduced.trans = effective_op(spec, ElemKind::F64);
    keys.insert(variant_string(reduced));
  }
  CHECK(keys.size() == 16);
}

TEST_CASE("alpha must be finite") {
  TriangularSpec spec;
  spec.alpha = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.alpha = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.alpha = 2.5;
  CHECK_NOTHROW(validate(spec));
}
