#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "lacelab/harness.hpp"
#include "lacelab/lace.hpp"

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

// Edges that break a two-edge lace {0 t1, s2 n} when added: the lace edges,
// 0t with t > t1, and sn with s < s2.
bool breaks_two_lace(int t1, int s2, int n, int s, int t) {
  if ((s == 0 && t == t1) || (s == s2 && t == n)) return true;
  if (s == 0 && t > t1) return true;
  return t == n && s < s2;
}

}  // namespace

TEST_SUITE("lace") {
  TEST_CASE("connectivity") {
    CHECK(is_connected(IntervalGraph(0, 4, {{0, 2}, {1, 4}})));
    CHECK_FALSE(is_connected(IntervalGraph(0, 4, {{0, 2}, {2, 4}})));
    CHECK(is_minimally_connected(IntervalGraph(0, 4, {{0, 2}, {1, 4}})));
    CHECK_FALSE(is_minimally_connected(IntervalGraph(0, 4, {{0, 2}, {1, 4}, {0, 3}})));
    CHECK_THROWS_AS(lace_of(IntervalGraph(0, 3, {{0, 1}})), Error);
  }

  TEST_CASE("lace enumeration matches brute force") {
    for (int n = 1; n <= 6; ++n) {
      for (int N = 1; N <= n; ++N) {
        std::set<std::pair<std::uint64_t, std::uint64_t>> a;
        std::set<std::pair<std::uint64_t, std::uint64_t>> b;
        for (const auto& l : enumerate_laces(N, 0, n)) {
          a.insert({static_cast<std::uint64_t>(l.graph.mask()), static_cast<std::uint64_t>(l.graph.mask() >> 64)});
          CHECK(l.size() == N);
          CHECK(is_minimally_connected(l.graph));
        }
        for (const auto& g : enumerate_laces_bruteforce(N, 0, n)) {
          b.insert({static_cast<std::uint64_t>(g.mask()), static_cast<std::uint64_t>(g.mask() >> 64)});
        }
        CHECK(a == b);
      }
    }
  }

  TEST_CASE("lace_of is idempotent and recovers its elements") {
    for (int n = 2; n <= 7; ++n) {
      for (int N = 1; N <= 3; ++N) {
        for (const auto& l : enumerate_laces(N, 0, n)) {
          const Lace again = lace_of(l.graph);
          CHECK(again.graph == l.graph);
          CHECK(again.elements == l.elements);
        }
      }
    }
  }

  TEST_CASE("compatible edges of two-edge laces follow the closed rule") {
    for (int n = 3; n <= 9; ++n) {
      for (const auto& l : enumerate_laces(2, 0, n)) {
        const int t1 = l.elements[0].second;
        const int s2 = l.elements[1].first;
        const IntervalGraph c = compatible_edges(l);
        for (int s = 0; s <= n; ++s) {
          for (int t = s + 1; t <= n; ++t) CHECK(c.contains(s, t) == !breaks_two_lace(t1, s2, n, s, t));
        }
      }
    }
  }

  TEST_CASE("compatible set characterises lace_of on random graphs") {
    std::uint64_t k = 0;
    for (int trial = 0; trial < 400; ++trial) {
      const int n = 3 + static_cast<int>(draw(5, 9, k++) % 6);
      IntervalGraph g(0, n);
      for (int s = 0; s <= n; ++s) {
        for (int t = s + 1; t <= n; ++t) {
          if (draw(5, 9, k++) % 3 == 0) g.add(s, t);
        }
      }
      if (!is_connected(g)) continue;
      const Lace l = lace_of(g);
      const IntervalGraph c = compatible_edges(l);
      CHECK((g.mask() & l.graph.mask()) == l.graph.mask());
      CHECK((g.mask() & ~(l.graph.mask() | c.mask())) == 0);
    }
  }

  TEST_CASE("J by laces equals J by connected graphs") {
    for (const Rational beta : {Rational(1, 3), Rational(1)}) {
      for (std::uint64_t i = 0; i < 60; ++i) {
        const Walk w = random_walk(1, 9, 17, 2, i);
        for (int a = 0; a <= w.length(); ++a) {
          for (int b = a + 1; b <= std::min(w.length(), a + 6); ++b) {
            CHECK(J_via_laces(w, a, b, beta).J == J_bruteforce(w, a, b, beta));
          }
        }
      }
    }
  }

  TEST_CASE("KJ identity and the sign mutation") {
    int broken = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
      const Walk w = random_walk(1, 10, 3, 1, i);
      CHECK(check_KJ_identity(w, Rational(1, 2)).holds);
      LaceOptions flip;
      flip.flip_J2_sign = true;
      broken += check_KJ_identity(w, Rational(1, 2), flip).holds ? 0 : 1;
    }
    CHECK(broken > 0);
  }

  TEST_CASE("first lace coefficient") {
    const PiTable t = enumerate_pi(2, 6);
    const Rational beta(1, 2);
    CHECK(t.coefficient(1, 2, LatticePoint{0, 0}, beta) == Rational(4) * beta);
    CHECK(t.coefficient(1, 2, LatticePoint{1, 1}, beta) == Rational(0));
    for (int n = 0; n <= 6; ++n) {
      for (const auto& x : canonical_points(2, 2)) {
        if (!x.is_origin()) CHECK(t.coefficient(1, n, x, beta) == Rational(0));
      }
    }
  }

  TEST_CASE("second lace coefficient by direct summation") {
    const int d = 2;
    const int n_max = 7;
    const PiTable t = enumerate_pi(d, n_max);
    const Rational beta(1, 2);
    const Rational u = Rational(1) - beta;
    for (int n = 3; n <= n_max; ++n) {
      std::map<LatticePoint, Rational> ref;
      for_each_walk(d, n, [&](const Walk& w) {
        for (int t1 = 2; t1 < n; ++t1) {
          if (!w.coincide(0, t1)) continue;
          for (int s2 = 1; s2 < t1; ++s2) {
            if (!w.coincide(s2, n)) continue;
            Rational v = beta * beta;
            for (int s = 0; s <= n; ++s) {
              for (int tt = s + 1; tt <= n; ++tt) {
                if (w.coincide(s, tt) && !breaks_two_lace(t1, s2, n, s, tt)) v *= u;
              }
            }
            ref[w.end()] += v;
          }
        }
      });
      for (const auto& x : canonical_points(d, n)) {
        const auto it = ref.find(x);
        const Rational want = it == ref.end() ? Rational(0) : it->second;
        CHECK(t.coefficient(2, n, x, beta) == want);
      }
    }
  }

  TEST_CASE("fixed point equation holds coefficientwise") {
    const int d = 2;
    const int n_max = 7;
    const PiTable pt = enumerate_pi(d, n_max);
    const CnTable ct = enumerate_cn(d, n_max);
    for (const Rational beta : {Rational(1, 4), Rational(1)}) {
      auto r = series_convolve(ct.series(beta), delta_saw_series(pt, beta, 8));
      r -= series_delta0<Rational>(d, n_max);
      CHECK(r.is_zero_series());
      // Dropping Pi^(2) leaves a defect.
      auto r1 = series_convolve(ct.series(beta), delta_saw_series(pt, beta, 1));
      r1 -= series_delta0<Rational>(d, n_max);
      CHECK_FALSE(r1.is_zero_series());
    }
  }

  TEST_CASE("float lace coefficients match the exact ones") {
    const PiTable t = enumerate_pi(2, 6);
    const auto f = t.function(2, 0.5, 0.25);
    const auto e = t.series(2, Rational(1, 2)).evaluate(Rational(1, 4));
    for (const auto& x : canonical_points(2, 3)) CHECK(f(x) == doctest::Approx(e(x).to_double()).epsilon(1e-14));
  }

  TEST_CASE("triple sum is symmetric and A_N needs d > 4") {
    const LatticePoint u{2, 0, 0, 0, 0};
    const LatticePoint v{1, 1, 0, 0, 0};
    CHECK(triple_sum_check(u, v, 5) == doctest::Approx(triple_sum_check(v, u, 5)).epsilon(1e-13));
    CHECK_THROWS_AS(A_N_bound(4, 3, 4, 1.0), Error);
    const auto A = A_N_bound(5, 4, 4, 2.0);
    REQUIRE(A.size() == 3);
    CHECK(A[0].N == 2);
    CHECK(A[0].A(LatticePoint{1, 0, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(A[1].exact);
    CHECK_FALSE(A[2].exact);
  }
}
