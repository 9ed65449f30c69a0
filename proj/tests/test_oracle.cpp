#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "rectri/base_kernels.hpp"
#include "rectri/oracle.hpp"
#include "test_support.hpp"

using namespace rectri;
using namespace rectri::testing;

TEST_CASE("materialization zeroes the opposite triangle and forces unit") {
  auto a = from_rows<double>({{5, 7}, {3, 5}});
  auto lower =
      oracle::materialize_triangle<double>(a.view(), Uplo::Lower, Diag::NonUnit);
  CHECK(lower(0, 0) == 5.0);
  CHECK(lower(0, 1) == 0.0);
  CHECK(lower(1, 0) == 3.0);

  auto unit =
      oracle::materialize_triangle<double>(a.view(), Uplo::Lower, Diag::Unit);
  CHECK(unit(0, 0) == 1.0);
  CHECK(unit(1, 1) == 1.0);
  CHECK(unit(1, 0) == 3.0);

  // Pure: the source is untouched, and masked NaN never reaches the output.
  auto poisoned = a;
  poisoned(0, 1) = std::numeric_limits<double>::quiet_NaN();
  auto clean =
      oracle::materialize_triangle<double>(poisoned.view(), Uplo::Lower,
                                           Diag::NonUnit);
  CHECK(clean(0, 1) == 0.0);
}

TEST_CASE("oracle_trmm frozen examples") {
  auto eye = identity<double>(2);
  auto b = from_rows<double>({{1}, {2}});
  auto spec = make_spec(Side::Left, Uplo::Lower, Trans::NoTrans, Diag::NonUnit,
                        3.0);
  auto out = oracle::oracle_trmm<double>(spec, eye.cview(), b.cview());
  CHECK(out(0, 0) == 3.0);
  CHECK(out(1, 0) == 6.0);

  auto a = from_rows<double>({{5, 0}, {3, 5}});
  auto ones = from_rows<double>({{1}, {1}});
  auto spec_u = make_spec(Side::Left, Uplo::Lower, Trans::NoTrans, Diag::Unit);
  auto out_u = oracle::oracle_trmm<double>(spec_u, a.cview(), ones.cview());
  CHECK(out_u(0, 0) == 1.0);
  CHECK(out_u(1, 0) == 4.0);

  auto bad = make_random<double>(3, 2, 1);
  CHECK_THROWS_AS(oracle::oracle_trmm<double>(spec, eye.cview(), bad.cview()),
                  ShapeError);
}

TEST_CASE("oracle_trsm frozen examples") {
  auto eye = identity<double>(2);
  auto b = from_rows<double>({{4}, {10}});
  auto spec = make_spec(Side::Left, Uplo::Lower, Trans::NoTrans, Diag::NonUnit,
                        0.5);
  auto out = oracle::oracle_trsm<double>(spec, eye.cview(), b.cview());
  CHECK(out(0, 0) == 2.0);
  CHECK(out(1, 0) == 5.0);

  spec.alpha = 1.0;
  auto a = from_rows<double>({{2, 0}, {1, 4}});
  auto b2 = from_rows<double>({{2}, {6}});
  auto out2 = oracle::oracle_trsm<double>(spec, a.cview(), b2.cview());
  CHECK(out2(0, 0) == 1.0);
  CHECK(out2(1, 0) == 1.25);

  auto singular = from_rows<double>({{2, 0}, {1, 0}});
  bool threw = false;
  try {
    oracle::oracle_trsm<double>(spec, singular.cview(), b2.cview());
  } catch (const SingularityError& e) {
    threw = true;
    CHECK(e.index() == 1);
  }
  CHECK(threw);

  // Unit diag cannot be singular after materialization.
  spec.diag = Diag::Unit;
  CHECK_NOTHROW(oracle::oracle_trsm<double>(spec, singular.cview(), b2.cview()));
}

TEST_CASE("oracle_trmm agrees with trmm_base on 500 random cases") {
  std::mt19937_64 seeds(4242);
  const auto variants = all_variants(1.0, true);
  for (int trial = 0; trial < 500; ++trial) {
    TriangularSpec spec = variants[trial % variants.size()];
    spec.alpha = (trial % 3 == 0) ? -0.75 : 1.0;
    std::uniform_int_distribution<index_t> dim(1, 8);
    std::mt19937_64 rng(seeds());
    const index_t n = dim(rng);
    const index_t m = dim(rng);
    auto a = make_random<double>(n, n, seeds());
    auto b = make_rhs<double>(spec, n, m, seeds());

    auto expected = oracle::oracle_trmm<double>(spec, a.cview(), b.cview());
    MatrixBuffer<double> got = b;
    trmm_base<double>(spec, a.view(), got.view());
    const double tol = 8.0 * double(n) * std::numeric_limits<double>::epsilon() *
                       masked_norm_inf(a, spec.uplo, spec.diag) *
                       std::max(max_abs(b), 1.0);
    CHECK(max_abs_diff(got, expected) <= tol);
  }
}

TEST_CASE("oracle_trsm residual self-consistency") {
  const double eps = std::numeric_limits<double>::epsilon();
  std::uint64_t seed = 9000;
  for (const TriangularSpec& base_spec : all_variants()) {
    TriangularSpec spec = base_spec;
    spec.alpha = 2.0;
    const index_t n = 24, m = 3;
    ++seed;
    auto a = make_dominant<double>(n, spec.uplo, seed);
    if (spec.diag == Diag::Unit) damp_off_diagonal(a, 1.0 / double(n));
    auto b = make_rhs<double>(spec, n, m, seed * 3);

    auto x = oracle::oracle_trsm<double>(spec, a.cview(), b.cview());
    const double resid = trsm_residual_inf(spec, a, x, b);
    const double bound = 8.0 * double(n) * eps *
                         masked_norm_inf(a, spec.uplo, spec.diag) *
                         std::max(max_abs(x), max_abs(b));
    CHECK(resid <= bound);
  }
}

TEST_CASE("oracle round trip recovers B on well-conditioned systems") {
  const double eps = std::numeric_limits<double>::epsilon();
  std::uint64_t seed = 9100;
  for (const TriangularSpec& spec : all_variants()) {
    const index_t n = 16, m = 2;
    ++seed;
    auto a = make_dominant<double>(n, spec.uplo, seed);
    if (spec.diag == Diag::Unit) damp_off_diagonal(a, 1.0 / double(n));
    auto b = make_rhs<double>(spec, n, m, seed * 7);

    auto x = oracle::oracle_trsm<double>(spec, a.cview(), b.cview());
    auto back = oracle::oracle_trmm<double>(spec, a.cview(), x.cview());

    // Condition proxy for a diagonally dominant triangle.
    const double a_norm = masked_norm_inf(a, spec.uplo, spec.diag);
    double min_diag = std::numeric_limits<double>::infinity();
    for (index_t r = 0; r < n; ++r)
      min_diag = std::min(min_diag, spec.diag == Diag::Unit
                                        ? 1.0
                                        : std::abs(double(a(r, r))));
    const double cond_proxy = a_norm / min_diag;
    const double tol =
        64.0 * double(n) * eps * cond_proxy * std::max(max_abs(b), 1.0);
    CHECK(max_abs_diff(back, b) <= tol);
  }
}
