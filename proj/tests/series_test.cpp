#include "doctest.h"
#include "lacelab/series.hpp"
#include "lacelab/srw.hpp"

using namespace lacelab;

TEST_SUITE("series") {
  TEST_CASE("coefficients respect the l1 support rule") {
    SeriesFunction<Rational> s(2, 3, 3);
    CHECK_THROWS_AS(s.set_coeff(LatticePoint{2, 2}, 3, Rational(1)), Error);
    s.set_coeff(LatticePoint{1, 1}, 2, Rational(5));
    CHECK(s.coeff(LatticePoint{1, 1}, 2) == Rational(5));
    CHECK(s.coeff(LatticePoint{1, 1}, 1) == Rational(0));
  }

  TEST_CASE("random walk Green series times its kernel is delta0") {
    for (int d = 1; d <= 3; ++d) {
      const int n = 6;
      auto prod = series_convolve(green_rw_series(d, n), delta_rw_series(d, n));
      prod -= series_delta0<Rational>(d, n);
      CHECK(prod.is_zero_series());
    }
  }

  TEST_CASE("walk counts from the Green series") {
    // [lambda^n] G(0) in d = 1 is the central binomial coefficient C(n, n/2).
    const auto g = green_rw_series(1, 8);
    CHECK(g.coeff(LatticePoint{0}, 4) == Rational(6));
    CHECK(g.coeff(LatticePoint{0}, 8) == Rational(70));
    CHECK(g.coeff(LatticePoint{2}, 4) == Rational(4));
    const auto g2 = green_rw_series(2, 4);
    // d = 2 returns: C(2n, n)^2.
    CHECK(g2.coeff(LatticePoint{0, 0}, 4) == Rational(36));
  }

  TEST_CASE("evaluate agrees with a manual sum") {
    const auto g = green_rw_series(2, 6);
    const auto v = SeriesFunction<double>::from_coefficients({delta0<double>(2)}).evaluate(0.3);
    CHECK(v(LatticePoint{0, 0}) == doctest::Approx(1.0));
    const auto ge = g.evaluate(Rational(1, 10));
    Rational manual(0);
    Rational p(1);
    for (int n = 0; n <= 6; ++n) {
      manual += g.coeff(LatticePoint{1, 1}, n) * p;
      p *= Rational(1, 10);
    }
    CHECK(ge(LatticePoint{1, 1}) == manual);
  }

  TEST_CASE("mismatched n_max is rejected") {
    CHECK_THROWS_AS(series_convolve(green_rw_series(2, 3), green_rw_series(2, 4)), Error);
  }
}
