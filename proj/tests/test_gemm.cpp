#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "rectri/gemm.hpp"
#include "rectri/simd.hpp"
#include "test_support.hpp"

using namespace rectri;
using namespace rectri::testing;

namespace {

// Pins the active microkernel ISA for one scope.
struct IsaGuard {
  explicit IsaGuard(simd::Isa isa) : saved(simd::active_isa()) {
    simd::set_active_isa(isa);
  }
  ~IsaGuard() { simd::set_active_isa(saved); }
  simd::Isa saved;
};

}  // namespace

TEST_CASE("gemm frozen examples") {
  auto a = from_rows<double>({{1, 2}, {3, 4}});
  auto b = identity<double>(2);
  MatrixBuffer<double> c(2, 2, 0.0);
  gemm<double>(1.0, Trans::NoTrans, a.view(), b.view(), 0.0, c.view());
  CHECK(c(0, 0) == 1.0);
  CHECK(c(0, 1) == 2.0);
  CHECK(c(1, 0) == 3.0);
  CHECK(c(1, 1) == 4.0);

  auto b2 = from_rows<double>({{5, 6}, {7, 8}});
  gemm<double>(1.0, Trans::NoTrans, a.view(), b2.view(), 0.0, c.view());
  CHECK(c(0, 0) == 19.0);
  CHECK(c(0, 1) == 22.0);
  CHECK(c(1, 0) == 43.0);
  CHECK(c(1, 1) == 50.0);

  auto ones = from_rows<double>({{1}, {1}});
  auto c2 = from_rows<double>({{10}, {10}});
  gemm<double>(1.0, Trans::Trans, a.view(), ones.view(), 1.0, c2.view());
  CHECK(c2(0, 0) == 14.0);
  CHECK(c2(1, 0) == 16.0);

  // ConjTrans behaves as Trans on reals.
  auto c3 = from_rows<double>({{10}, {10}});
  gemm<double>(1.0, Trans::ConjTrans, a.view(), ones.view(), 1.0, c3.view());
  CHECK(bitwise_equal(c2, c3));
}

TEST_CASE("gemm errors") {
  MatrixBuffer<double> a(3, 2, 1.0);
  MatrixBuffer<double> b(2, 4, 1.0);
  MatrixBuffer<double> c(3, 4, 0.0);
  CHECK_NOTHROW(gemm<double>(1.0, Trans::NoTrans, a.view(), b.view(), 0.0,
                             c.view()));

  MatrixBuffer<double> bad(3, 4, 1.0);
  CHECK_THROWS_AS(gemm<double>(1.0, Trans::NoTrans, a.view(), bad.view(), 0.0,
                               c.view()),
                  ShapeError);
  CHECK_THROWS_AS(gemm<double>(1.0, Trans::Trans, a.view(), b.view(), 0.0,
                               c.view()),
                  ShapeError);

  // C sharing storage with an input is rejected.
  MatrixBuffer<double> m(4, 4, 1.0);
  auto v = m.view();
  CHECK_THROWS_AS(
      gemm<double>(1.0, Trans::NoTrans, MatrixView<const double>(v.subview(0, 0, 2, 2)),
                   MatrixView<const double>(v.subview(2, 2, 2, 2)), 0.0,
                   v.subview(1, 1, 2, 2)),
      AliasError);
  // Disjoint windows of one buffer are fine.
  CHECK_NOTHROW(
      gemm<double>(1.0, Trans::NoTrans, MatrixView<const double>(v.subview(0, 0, 2, 2)),
                   MatrixView<const double>(v.subview(0, 2, 2, 2)), 0.0,
                   v.subview(2, 0, 2, 2)));
}

template <typename T>
static void oracle_property(simd::Isa isa) {
  if (!simd::host_supports(isa)) return;
  IsaGuard guard(isa);
  std::mt19937_64 seeds(1234);
  for (int trial = 0; trial < 60; ++trial) {
    std::mt19937_64 rng(seeds());
    std::uniform_int_distribution<index_t> dim(1, 16);
    const index_t m = dim(rng);
    const index_t n = dim(rng);
    const index_t k = dim(rng);
    const Trans ta = trial % 2 ? Trans::Trans : Trans::NoTrans;
    const Trans tb = (trial / 2) % 2 ? Trans::Trans : Trans::NoTrans;
    // Positive operands: the per-entry bound assumes no cancellation.
    auto a = make_random<T>(ta == Trans::NoTrans ? m : k,
                            ta == Trans::NoTrans ? k : m, seeds(), 0.1, 1.0);
    auto b = make_random<T>(tb == Trans::NoTrans ? k : n,
                            tb == Trans::NoTrans ? n : k, seeds(), 0.1, 1.0);
    auto c = make_random<T>(m, n, seeds(), 0.1, 1.0);
    const T alpha = static_cast<T>(1.25);
    const T beta = static_cast<T>(0.5);

    auto expected = gemm_reference(double(alpha), ta, a, tb, b, double(beta), c);
    gemm<T>(alpha, ta, a.view(), tb, b.view(), beta, c.view());

    const double ulp = std::numeric_limits<T>::epsilon();
    for (index_t j = 0; j < n; ++j)
      for (index_t i = 0; i < m; ++i) {
        const double tol = 8.0 * double(k) * ulp * std::abs(expected(i, j));
        CHECK(std::abs(double(c(i, j)) - expected(i, j)) <= tol);
      }
  }
}

TEST_CASE("gemm matches the triple loop within 8*k*ulp per entry") {
  oracle_property<float>(simd::Isa::Scalar);
  oracle_property<double>(simd::Isa::Scalar);
  oracle_property<float>(simd::detected_isa());
  oracle_property<double>(simd::detected_isa());
}

TEST_CASE("scalar and SIMD microkernels agree bit for bit") {
  if (simd::detected_isa() == simd::Isa::Scalar) return;
  for (index_t m : {1, 7, 16, 33, 64}) {
    for (index_t k : {1, 5, 64, 130}) {
      auto a = make_random<float>(m, k, 77 * m + k);
      auto b = make_random<float>(k, 40, 99 * k + m);
      auto c0 = make_random<float>(m, 40, 55);
      auto c1 = c0;
      {
        IsaGuard guard(simd::Isa::Scalar);
        gemm<float>(1.5f, Trans::NoTrans, a.view(), b.view(), 2.0f, c0.view());
      }
      {
        IsaGuard guard(simd::detected_isa());
        gemm<float>(1.5f, Trans::NoTrans, a.view(), b.view(), 2.0f, c1.view());
      }
      CHECK(bitwise_equal(c0, c1));

      auto da = make_random<double>(m, k, 177 * m + k);
      auto db = make_random<double>(k, 40, 199 * k + m);
      auto dc0 = make_random<double>(m, 40, 551);
      auto dc1 = dc0;
      {
        IsaGuard guard(simd::Isa::Scalar);
        gemm<double>(1.5, Trans::NoTrans, da.view(), db.view(), 2.0, dc0.view());
      }
      {
        IsaGuard guard(simd::detected_isa());
        gemm<double>(1.5, Trans::NoTrans, da.view(), db.view(), 2.0, dc1.view());
      }
      CHECK(bitwise_equal(dc0, dc1));
    }
  }
}

TEST_CASE("sequential and parallel backends agree") {
  auto a = make_random<double>(100, 60, 1);
  auto b = make_random<double>(60, 90, 2);
  auto c_seq = make_random<double>(100, 90, 3);
  auto c_par = c_seq;
  gemm<double>(0.7, Trans::NoTrans, a.view(), b.view(), 0.3, c_seq.view(),
               Backend::seq());
  gemm<double>(0.7, Trans::NoTrans, a.view(), b.view(), 0.3, c_par.view(),
               Backend::par(5));
  CHECK(bitwise_equal(c_seq, c_par));
}

TEST_CASE("gemm into a subview equals gemm into a standalone copy") {
  MatrixBuffer<double> big(50, 50, 0.0);
  auto a = make_random<double>(20, 30, 11);
  auto b = make_random<double>(30, 10, 12);

  MatrixView<double> window = big.view().subview(17, 23, 20, 10);
  auto standalone = make_random<double>(20, 10, 13);
  for (index_t c = 0; c < 10; ++c)
    for (index_t r = 0; r < 20; ++r) window(r, c) = standalone(r, c);

  gemm<double>(2.0, Trans::NoTrans, a.view(), b.view(), 1.0, window);
  gemm<double>(2.0, Trans::NoTrans, a.view(), b.view(), 1.0, standalone.view());

  for (index_t c = 0; c < 10; ++c)
    for (index_t r = 0; r < 20; ++r) CHECK(window(r, c) == standalone(r, c));
}

TEST_CASE("beta and alpha conventions") {
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // beta == 0 overwrites C without reading it.
  auto a = from_rows<double>({{1, 0}, {0, 1}});
  auto b = from_rows<double>({{2, 3}, {4, 5}});
  MatrixBuffer<double> c(2, 2, nan);
  gemm<double>(1.0, Trans::NoTrans, a.view(), b.view(), 0.0, c.view());
  CHECK(all_finite(c));
  CHECK(c(1, 0) == 4.0);

  // alpha == 0 skips the product, so NaN in A cannot reach C.
  MatrixBuffer<double> poisoned(2, 2, nan);
  auto c2 = from_rows<double>({{1, 2}, {3, 4}});
  gemm<double>(0.0, Trans::NoTrans, poisoned.view(),
               MatrixView<const double>(poisoned.view()), 2.0, c2.view());
  CHECK(c2(0, 0) == 2.0);
  CHECK(c2(1, 1) == 8.0);
}

TEST_CASE("scale") {
  auto b = from_rows<double>({{3, 4}});
  scale<double>(1.0, b.view());
  CHECK(b(0, 0) == 3.0);
  CHECK(b(0, 1) == 4.0);

  scale<double>(0.0, b.view());
  CHECK(b(0, 0) == 0.0);
  CHECK(b(0, 1) == 0.0);

  auto b2 = from_rows<double>({{2}, {4}});
  scale<double>(2.5, b2.view());
  CHECK(b2(0, 0) == 5.0);
  CHECK(b2(1, 0) == 10.0);

  // Scaling a subview touches only its window.
  MatrixBuffer<double> m(4, 4, 1.0);
  scale<double>(3.0, m.view().subview(1, 1, 2, 2));
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 1) == 3.0);
  CHECK(m(2, 2) == 3.0);
  CHECK(m(3, 3) == 1.0);
}
