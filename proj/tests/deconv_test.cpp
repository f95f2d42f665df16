#include <cmath>

#include "doctest.h"
#include "lacelab/deconv.hpp"

using namespace lacelab;

namespace {

// Root of sum(Delta) - (1 - 2d mu) by bisection on [-1/(4d), 1/(2d)].
double mu_by_bisection(const LatticeFunction<double>& delta) {
  const int d = delta.dim();
  const double s = delta.sum();
  double lo = -0.25 / d;
  double hi = 0.5 / d;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (s - (1.0 - 2 * d * mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("deconv") {
  TEST_CASE("choice of mu") {
    CHECK(choose_mu(delta0<double>(3)) == 0.0);
    CHECK(choose_mu(delta_rw<double>(4, 0.07)) == doctest::Approx(0.07).epsilon(1e-15));
    CHECK(choose_mu(delta_rw<double>(5, 0.1)) == 0.1);
    auto delta = delta_rw<double>(5, 0.1, 2);
    delta.axpy(0.3, random_certified_perturbation(5, 2, 4));
    delta.set(LatticePoint(5), delta(LatticePoint(5)) + 0.02);
    CHECK(choose_mu(delta) == doctest::Approx(mu_by_bisection(delta)).epsilon(1e-14));
    auto far = delta0<double>(2);
    far.set(LatticePoint(2), -1.0);
    CHECK_THROWS_AS(choose_mu(far), Error);
  }

  TEST_CASE("harmonicity of the continuum profile") {
    for (const LatticePoint& x : {LatticePoint{3, 1, 2, 0, 5}, LatticePoint{1, 1, 1, 1, 1}, LatticePoint{7, 0, 0, 0, 0}}) {
      CHECK(std::abs(harmonicity_sum(x)) < 1e-14);
    }
  }

  TEST_CASE("certified perturbations") {
    for (int d = 1; d <= 6; ++d) {
      const auto P = certified_perturbation(d);
      CHECK(std::abs(P.sum()) < 1e-15);
      CHECK(is_symmetric(P));
      double sup = 0.0;
      P.for_each_nonzero([&](const LatticePoint& x, double v) { sup = std::max(sup, std::abs(v) * radial_power(x, d + 4)); });
      CHECK(sup > 0.0);
      CHECK(sup <= 1.0 + 1e-12);
    }
    const auto R = random_certified_perturbation(5, 3, 99);
    CHECK(std::abs(R.sum()) < 1e-14);
    CHECK(is_symmetric(R));
  }

  TEST_CASE("rho certificate") {
    const int d = 5;
    const double beta = 0.01;
    auto delta = delta_rw<double>(d, 0.1, 2);
    delta.axpy(beta, certified_perturbation(d));
    const RhoCertificate c = build_rho(delta, choose_mu(delta), beta);
    CHECK(c.valid());
    CHECK(c.exponent == d + 4);
    CHECK(c.decay_constant == doctest::Approx(1.0));
    CHECK(c.first_moment_max < 1e-12);
    CHECK(c.mixed_moment_max < 1e-12);
    auto lopsided = delta;
    lopsided.set(LatticePoint{2, 0, 0, 0, 0}, lopsided(LatticePoint{2, 0, 0, 0, 0}) + 1e-3);
    CHECK_FALSE(build_rho(lopsided, 0.1, beta).valid());
  }

  TEST_CASE("rho * G norms") {
    const GreenRw g = green_rw(5, 0.1, 256, 5);
    LatticeFunction<double> zero(Box(5, 2), 2);
    CHECK(rho_green_norm(zero, g.G).norm == 0.0);
    const auto rho = certified_perturbation(5);
    const auto r = rho_green_norm(rho, g.G);
    CHECK(r.trusted_radius == 3);
    CHECK(r.norm > 0.0);
    // mu = 0 makes G the delta function.
    const auto rep = check_rhoG_uniform(rho, 5, {0.0, 0.05, 0.1}, 256, 5);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].norm == doctest::Approx(banach_norm(rho)));
    CHECK(rep.rows[1].factor_defect < 1e-14);
    // The critical row carries the truncation of the walk series.
    CHECK(rep.rows[2].factor_defect < 1e-7);
  }

  TEST_CASE("deconvolving the random walk kernel returns its green function") {
    const int d = 5;
    double last_gap = 1.0;
    double last_E = 1.0;
    for (const int n : {256, 1024}) {
      const Deconvolution r = deconvolve(delta_rw<double>(d, 0.1, 2), 1.0, n, 4);
      CHECK(r.report.mu == 0.1);
      double gap = 0.0;
      for (const auto& x : canonical_points(d, 4)) gap = std::max(gap, std::abs(r.G(x) - r.Grw(x)));
      // G solves the equation exactly, so it differs from G^rw only by the series truncation.
      CHECK(gap <= r.report.green_tail_error);
      CHECK(std::abs(r.report.max_ratio - 1.0) <= r.report.green_tail_error);
      CHECK(gap < last_gap / 10);
      CHECK(r.report.E_norm < last_E / 10);
      last_gap = gap;
      last_E = r.report.E_norm;
    }
  }

  TEST_CASE("small perturbation") {
    const int d = 5;
    const double beta = 0.01;
    auto delta = delta_rw<double>(d, 0.1, 2);
    delta.axpy(beta, certified_perturbation(d));
    const Deconvolution r = deconvolve(delta, beta, 256, 5);
    const DeconvReport& p = r.report;
    CHECK(p.ok());
    CHECK(p.E_bound_holds);
    CHECK(p.E_norm <= p.E_bound);
    CHECK(p.max_ratio <= 2.0);
    CHECK(p.symmetry_defect < 1e-12);
    // Delta * G = delta0 pointwise inside the box.
    const auto prod = convolve(delta, r.G);
    for (const auto& x : canonical_points(d, 3)) CHECK(std::abs(prod(x) - (x.is_origin() ? 1.0 : 0.0)) < 1e-10);
  }

  TEST_CASE("larger beta moves G further from the random walk") {
    const int d = 5;
    double last = 0.0;
    for (const double beta : {0.001, 0.01, 0.05}) {
      auto delta = delta_rw<double>(d, 0.1, 2);
      delta.axpy(beta, certified_perturbation(d));
      const auto r = deconvolve(delta, beta, 256, 4);
      CHECK(r.report.E_norm > last);
      last = r.report.E_norm;
    }
  }

  TEST_CASE("asymptotic comparison") {
    const GreenRw g = green_rw(5, 0.1, 256, 4);
    const auto same = green_asymp_check(g.G, g.G, 0.0);
    CHECK(same.max_difference == 0.0);
    const GreenRw h = green_rw(5, 0.099, 256, 4);
    const auto diff = green_asymp_check(h.G, g.G, 0.01);
    CHECK(diff.max_difference > 0.0);
    CHECK(std::isfinite(diff.constant));
  }

  TEST_CASE("bubble diagram") {
    const auto one = bubble_diagram(delta0<double>(4));
    CHECK(one.value == 1.0);
    const auto b5 = bubble_diagram(green_rw(5, 0.1, 512, 8).G);
    CHECK(b5.converging);
    CHECK(b5.shell_exponent < -1.0);
    CHECK(b5.cumulative.back() == doctest::Approx(b5.value));
    const auto b3 = bubble_diagram(green_rw(3, 1.0 / 6, 512, 8).G);
    CHECK_FALSE(b3.converging);
    CHECK(b3.last_shell_fraction > b5.last_shell_fraction);
  }
}
