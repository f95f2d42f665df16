#include <cmath>
#include <random>

#include "doctest.h"
#include "lacelab/lattice.hpp"

using namespace lacelab;

namespace {

// Direct double loop over both supports.
LatticeFunction<double> naive_convolve(const LatticeFunction<double>& f, const LatticeFunction<double>& g, int R) {
  LatticeFunction<double> out(Box(f.dim(), R), R);
  f.for_each_nonzero([&](const LatticePoint& y, double a) {
    g.for_each_nonzero([&](const LatticePoint& z, double b) {
      const LatticePoint x = y + z;
      if (x.linf() <= R) out.values()[out.box().index(x)] += a * b;
    });
  });
  return out;
}

LatticeFunction<double> random_function(int d, int r, std::mt19937_64& rng, bool symmetric) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LatticeFunction<double> f(Box(d, r), 2 * r);
  for (std::int64_t i = 0; i < f.box().size(); ++i) f.values()[i] = u(rng);
  if (symmetric) {
    for (std::int64_t i = 0; i < f.box().size(); ++i) {
      f.values()[i] = f.values()[f.box().index(f.box().point(i).canonical())];
    }
  }
  return f;
}

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("box indexing round trips") {
    const Box b(3, 2);
    CHECK(b.size() == 125);
    for (std::int64_t i = 0; i < b.size(); ++i) CHECK(b.index(b.point(i)) == i);
    CHECK(b.point(0) == LatticePoint{-2, -2, -2});
  }

  TEST_CASE("canonical points and orbit sizes tile the box") {
    for (int d = 1; d <= 5; ++d) {
      for (int R = 0; R <= 4; ++R) {
        const auto reps = canonical_points(d, R);
        CHECK(static_cast<std::int64_t>(reps.size()) == binomial(R + d, d));
        std::int64_t total = 0;
        for (const auto& p : reps) {
          CHECK(p.is_canonical());
          total += orbit_size(p);
        }
        CHECK(total == Box(d, R).size());
      }
    }
  }

  TEST_CASE("orbit size by explicit enumeration") {
    const Box b(3, 2);
    for (const auto& c : canonical_points(3, 2)) {
      std::int64_t n = 0;
      for (std::int64_t i = 0; i < b.size(); ++i) n += b.point(i).canonical() == c ? 1 : 0;
      CHECK(orbit_size(c) == n);
    }
  }

  TEST_CASE("radial power convention at the origin") {
    CHECK(radial_power(LatticePoint(4), -3.0) == 1.0);
    CHECK(radial_power(LatticePoint{3, 4}, 1.0) == doctest::Approx(5.0));
  }

  TEST_CASE("general and symmetric convolution agree with the naive sum") {
    std::mt19937_64 rng(7);
    for (int d = 1; d <= 3; ++d) {
      const auto f = random_function(d, 2, rng, d > 1);
      const auto g = random_function(d, 3, rng, d > 1);
      const auto ref = naive_convolve(f, g, 5);
      const auto gen = convolve(f, g, ConvolvePath::kGeneral);
      CHECK((gen.values() - ref.values()).abs().maxCoeff() < 1e-12);
      if (d > 1) {
        const auto sym = convolve(f, g, ConvolvePath::kSymmetric);
        CHECK((sym.values() - ref.values()).abs().maxCoeff() < 1e-12);
      }
    }
  }

  TEST_CASE("clipping records the dropped mass") {
    LatticeFunction<double> f(Box(1, 2), 2);
    f.set(LatticePoint{2}, 1.0);
    f.set(LatticePoint{0}, 0.5);
    const auto g = f;
    const auto h = convolve(f, g);
    CHECK(h.radius() == 2);
    CHECK(h.truncated());
    // Only 2 + 2 = 4 falls outside the box.
    CHECK(h.truncation_bound() == doctest::Approx(1.0));
    CHECK(h(LatticePoint{2}) == doctest::Approx(1.0));
    CHECK(h(LatticePoint{0}) == doctest::Approx(0.25));
  }

  TEST_CASE("exact convolution is exact") {
    LatticeFunction<Rational> f(Box(2, 1), 4);
    f.set(LatticePoint{1, 0}, Rational(1, 3));
    f.set(LatticePoint{0, -1}, Rational(2, 7));
    const auto h = convolve(f, f);
    CHECK(h(LatticePoint{2, 0}) == Rational(1, 9));
    CHECK(h(LatticePoint{1, -1}) == Rational(4, 21));
    CHECK(h.sum() == Rational(13, 21) * Rational(13, 21));
  }

  TEST_CASE("banach norm takes the larger of mass and weighted sup") {
    LatticeFunction<double> f(Box(2, 3), 3);
    f.set(LatticePoint{3, 0}, 0.5);
    CHECK(banach_norm(f) == doctest::Approx(4.5));
    f.set(LatticePoint{0, 0}, 10.0);
    CHECK(banach_norm(f) == doctest::Approx(10.5));
  }

  TEST_CASE("submultiplicativity on random dense pairs") {
    std::mt19937_64 rng(11);
    for (int d = 1; d <= 3; ++d) {
      for (int k = 0; k < 20; ++k) {
        const auto f = random_function(d, 2, rng, false);
        const auto g = random_function(d, 2, rng, false);
        CHECK(banach_norm(convolve(f, g)) <= std::ldexp(1.0, d + 1) * banach_norm(f) * banach_norm(g));
      }
    }
  }

  TEST_CASE("symmetry helpers") {
    const auto d = delta_rw<double>(3, 0.1);
    CHECK(is_symmetric(d));
    CHECK(d.sum() == doctest::Approx(0.4));
    auto e = d;
    e.set(LatticePoint{1, 0, 0}, 0.0);
    CHECK_FALSE(is_symmetric(e));
    CHECK(symmetry_defect(e) == doctest::Approx(0.1));
  }

  TEST_CASE("set beyond the cap is rejected") {
    LatticeFunction<double> f(2, 3);
    CHECK_THROWS_AS(f.set(LatticePoint{4, 0}, 1.0), Error);
    f.set(LatticePoint{3, 0}, 1.0);
    CHECK(f.radius() == 3);
  }

  TEST_CASE("neumann inversion meets its contract") {
    LatticeFunction<double> f = delta0<double>(2, 12);
    f.set(LatticePoint{1, 0}, 0.01);
    f.set(LatticePoint{0, -1}, -0.005);
    const auto res = neumann_invert(f, 1e-16, 40);
    CHECK(res.residual < 1e-14);
    CHECK(res.bound_holds);
    // Geometric series in one variable as an oracle: (delta0 + a e1)^{-1}(k e1) = (-a)^k.
    LatticeFunction<double> g = delta0<double>(1, 20);
    g.set(LatticePoint{1}, 0.02);
    const auto inv = neumann_invert(g, 1e-18, 40).inverse;
    for (int k = 0; k <= 6; ++k) CHECK(inv(LatticePoint{k}) == doctest::Approx(std::pow(-0.02, k)).epsilon(1e-12));
  }

  TEST_CASE("neumann precondition") {
    LatticeFunction<double> f = delta0<double>(2, 4);
    f.set(LatticePoint{1, 0}, 0.2);
    CHECK_THROWS_AS(neumann_invert(f, 1e-12, 10), Error);
  }
}
