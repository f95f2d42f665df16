#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "lacelab/wsaw.hpp"

using namespace lacelab;

namespace {

template <typename F>
void for_each_walk(int d, int n, F&& fn) {
  std::vector<int> steps(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(Walk::from_steps(d, steps));
    int i = 0;
    while (i < n && ++steps[static_cast<std::size_t>(i)] == 2 * d) steps[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
}

// Coincident pairs counted from scratch.
std::int64_t pairs_of(const Walk& w) {
  std::int64_t k = 0;
  for (int s = 0; s <= w.length(); ++s) {
    for (int t = s + 1; t <= w.length(); ++t) k += w[s] == w[t] ? 1 : 0;
  }
  return k;
}

}  // namespace

TEST_SUITE("wsaw") {
  TEST_CASE("walk bookkeeping") {
    const Walk w = Walk::from_steps(2, {0, 2, 1, 3, 0});
    CHECK(w.length() == 5);
    CHECK(w.end() == LatticePoint{1, 0});
    CHECK(w.intersection_total() == 2);
    CHECK(w.visits(LatticePoint{0, 0}) == 2);
    CHECK(weight(w, Rational(1, 3)) == Rational(4, 9));
    CHECK(Walk::from_points(w.points()).intersection_total() == 2);
    CHECK_THROWS_AS(weight(w, Rational(3, 2)), Error);
  }

  TEST_CASE("table matches path-by-path enumeration") {
    const int d = 2;
    const int n_max = 6;
    const CnTable t = enumerate_cn(d, n_max);
    const Rational beta(1, 3);
    for (int n = 0; n <= n_max; ++n) {
      std::map<LatticePoint, Rational> ref;
      for_each_walk(d, n, [&](const Walk& w) {
        CHECK(w.intersection_total() == pairs_of(w));
        ref[w.end()] += weight(w, beta);
      });
      for (const auto& [x, v] : ref) CHECK(t.cn(n, x, beta) == v);
      CHECK(t.cn_function(n, beta).nonzero_count() == static_cast<std::int64_t>(ref.size()));
    }
  }

  TEST_CASE("self-avoiding walk counts in the square lattice") {
    const CnTable t = enumerate_cn(2, 8);
    const std::uint64_t saw[] = {1, 4, 12, 36, 100, 284, 780, 2172, 5916};
    for (int n = 0; n <= 8; ++n) CHECK(t.cn_total(n, Rational(1)) == Rational(static_cast<long>(saw[n])));
  }

  TEST_CASE("beta = 0 counts every walk") {
    for (int d = 1; d <= 3; ++d) {
      const CnTable t = enumerate_cn(d, 5);
      for (int n = 0; n <= 5; ++n) {
        CHECK(t.cn_total(n, Rational(0)) == pow(Rational(2 * d), n));
        CHECK(t.total_count(n) == static_cast<std::uint64_t>(std::pow(2 * d, n)));
      }
    }
  }

  TEST_CASE("monotone in beta") {
    const CnTable t = enumerate_cn(2, 7);
    for (int n = 0; n <= 7; ++n) {
      CHECK(t.cn_total(n, 0.25) >= t.cn_total(n, 0.5));
      CHECK(t.cn_total(n, 0.5) >= t.cn_total(n, 1.0));
    }
  }

  TEST_CASE("budget") {
    CHECK_THROWS_AS(enumerate_cn(3, 8, 1000), Error);
  }

  TEST_CASE("green function and susceptibility") {
    const CnTable t = enumerate_cn(2, 8);
    const Rational beta(1, 2);
    const Rational lambda(1, 5);
    const auto G = green_saw<Rational>(t, beta, lambda);
    CHECK(G.sum() == susceptibility_exact(t, beta, lambda));
    const auto Gs = t.series(beta).evaluate(lambda);
    CHECK(Gs == G);
    const double h = 1e-5;
    const auto s = susceptibility(t, 0.5, 0.2);
    const double fd = (susceptibility(t, 0.5, 0.2 + h).value - susceptibility(t, 0.5, 0.2 - h).value) / (2 * h);
    CHECK(s.value == doctest::Approx(G.sum().to_double()).epsilon(1e-13));
    CHECK(s.derivative == doctest::Approx(fd).epsilon(1e-8));
    CHECK(s.derivative <= 4.0 * s.value * s.value);
  }

  TEST_CASE("submultiplicativity in walk-splitting form") {
    const CnTable t = enumerate_cn(2, 7);
    for (const Rational beta : {Rational(0), Rational(1, 2), Rational(1)}) {
      const auto rep = check_cn_submultiplicativity(t, beta);
      CHECK(rep.pointwise_all(1));
      for (const auto& row : rep.rows) {
        CHECK(row.summed_holds);
        CHECK(row.pointwise_min_slack >= Rational(0));
      }
    }
  }
}
