#include <cmath>
#include <vector>

#include "doctest.h"
#include "lacelab/srw.hpp"
#include "lacelab/wsaw.hpp"

using namespace lacelab;

namespace {

// Counts n-step walks ending at each point by listing them.
LatticeFunction<Rational> pn_by_walks(int d, int n) {
  LatticeFunction<Rational> out(Box(d, n), n);
  std::vector<int> steps(static_cast<std::size_t>(n), 0);
  const Rational w = pow(Rational(1, 2 * d), n);
  while (true) {
    const Walk g = Walk::from_steps(d, steps);
    out.add(g.end(), w);
    int i = 0;
    while (i < n && ++steps[static_cast<std::size_t>(i)] == 2 * d) steps[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return out;
}

// int_0^inf e^{-t} I_0(t/d)^d dt by Simpson's rule plus the Gaussian tail.
double critical_origin_integral(int d) {
  const double h = 0.01;
  const int steps = 300000;
  const double T = h * steps;
  auto f = [d](double t) { return std::exp(d * std::log(std::cyl_bessel_i(0.0, t / d)) - t); };
  double s = f(0.0) + f(T);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  s *= h / 3.0;
  const double c = std::pow(d / (2.0 * M_PI), 0.5 * d);
  return s + c * std::pow(T, 1.0 - 0.5 * d) / (0.5 * d - 1.0);
}

}  // namespace

TEST_SUITE("srw") {
  TEST_CASE("exact transition probabilities match walk counting") {
    for (int d = 1; d <= 3; ++d) {
      for (int n = 0; n <= (d == 3 ? 3 : 4); ++n) {
        const auto p = pn_exact(d, n);
        CHECK(p == pn_by_walks(d, n));
        CHECK(p.sum() == Rational(1));
      }
    }
  }

  TEST_CASE("float, pointwise and table agree") {
    const int d = 3;
    const SrwKernelTable table(d, 3, 12);
    for (int n = 0; n <= 12; ++n) {
      const auto pf = pn_float(d, n);
      for (const auto& x : canonical_points(d, 3)) {
        CHECK(table.p(n, x) == doctest::Approx(pf(x)).epsilon(1e-13));
        CHECK(pn_point(x, 12)[n] == doctest::Approx(pf(x)).epsilon(1e-13));
      }
    }
    CHECK(table.p(4, LatticePoint{-1, 0, 1}) == doctest::Approx(table.p(4, LatticePoint{1, 1, 0})));
  }

  TEST_CASE("subcritical green function inverts the kernel") {
    const int d = 2;
    const double mu = 0.1;
    const GreenRw g = green_rw(d, mu, 120, 6);
    CHECK_FALSE(g.critical);
    CHECK(g.tail_bound < 1e-40);
    const auto prod = convolve(delta_rw<double>(d, mu, 6), g.G);
    for (const auto& x : canonical_points(d, 5)) {
      CHECK(prod(x) == doctest::Approx(x.is_origin() ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("critical value at the origin in d = 5") {
    const double oracle = critical_origin_integral(5);
    CHECK(oracle == doctest::Approx(1.1563081248).epsilon(1e-8));
    const auto v = green_rw_critical_point(LatticePoint(5), 1e-9);
    CHECK(v.value == doctest::Approx(oracle).epsilon(1e-7));
    const GreenRw g = green_rw(5, 0.1, 512, 2);
    CHECK(g.critical);
    CHECK(g.G(LatticePoint(5)) == doctest::Approx(oracle).epsilon(1e-5));
  }

  TEST_CASE("critical green function is harmonic off the origin") {
    const GreenRw g = green_rw(5, 0.1, 512, 4);
    const auto lap = convolve(delta_rw<double>(5, 0.1, 4), g.G);
    for (const auto& x : canonical_points(5, 3)) {
      CHECK(std::abs(lap(x) - (x.is_origin() ? 1.0 : 0.0)) < 1e-4);
    }
  }

  TEST_CASE("leading asymptotic constant") {
    const int d = 5;
    const double closed = 0.5 * d * std::tgamma(0.5 * d - 1.0) * std::pow(M_PI, -0.5 * d);
    CHECK(closed == doctest::Approx(0.12665).epsilon(1e-4));
    const GreenRw g = green_rw(d, 0.1, 512, 8);
    const EdgeworthFit fit = edgeworth_fit(g.G, 4.0, 8.0);
    CHECK(fit.a == doctest::Approx(closed).epsilon(0.01));
    CHECK(fit.relative_residual < 0.02);
  }

  TEST_CASE("gaussian bound constants shrink with c") {
    const SrwKernelTable table(2, 6, 40);
    const auto fit = gaussian_bound(table, {0.1, 0.5});
    REQUIRE(fit.c_and_C.size() == 2);
    CHECK(fit.c_and_C[0].second <= fit.c_and_C[1].second);
    CHECK(fit.samples > 0);
  }

  TEST_CASE("parameter checks") {
    CHECK_THROWS_AS(green_rw(2, 0.25, 64, 3), Error);
    CHECK_THROWS_AS(green_rw(3, 0.2, 64, 3), Error);
  }
}
