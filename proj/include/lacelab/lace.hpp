#ifndef LACELAB_LACE_HPP
#define LACELAB_LACE_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lacelab/lattice.hpp"
#include "lacelab/series.hpp"
#include "lacelab/wsaw.hpp"

namespace lacelab {

// Interval graphs are limited to b - a <= kMaxIntervalLength so that an edge set fits in 128 bits.
inline constexpr int kMaxIntervalLength = 15;

using EdgeMask = unsigned __int128;

// Bit of the edge st (local offsets 0 <= i < j <= kMaxIntervalLength).
inline int edge_bit(int i, int j) { return j * (j - 1) / 2 + i; }
inline EdgeMask edge_mask(int i, int j) { return EdgeMask(1) << edge_bit(i, j); }
inline int popcount(EdgeMask m) {
  return std::popcount(static_cast<std::uint64_t>(m)) + std::popcount(static_cast<std::uint64_t>(m >> 64));
}

using Edge = std::pair<int, int>;

// Set of edges st with a <= s < t <= b.
class IntervalGraph {
 public:
  IntervalGraph(int a, int b);
  IntervalGraph(int a, int b, const std::vector<Edge>& edges);
  static IntervalGraph from_mask(int a, int b, EdgeMask mask);

  int a() const { return a_; }
  int b() const { return b_; }
  EdgeMask mask() const { return mask_; }
  std::size_t size() const { return static_cast<std::size_t>(popcount(mask_)); }

  void add(int s, int t);
  void remove(int s, int t);
  bool contains(int s, int t) const;
  std::vector<Edge> edges() const;  // sorted by (s, t)
  std::string str() const;

  friend bool operator==(const IntervalGraph& x, const IntervalGraph& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.mask_ == y.mask_;
  }

 private:
  void check(int s, int t) const;
  int a_;
  int b_;
  EdgeMask mask_ = 0;
};

// a and b are endpoints of edges and every a < c < b satisfies s < c < t for some edge st.
bool is_connected(const IntervalGraph& g);
// Connected, and removing any single edge disconnects it.
bool is_minimally_connected(const IntervalGraph& g);

struct Lace {
  IntervalGraph graph;
  std::vector<Edge> elements;  // a_1 b_1, ..., a_N b_N in extraction order
  int size() const { return static_cast<int>(elements.size()); }
};

// The lace extracted from a connected graph: b_1 = max{t : a t in G}, a_1 = a;
// then b_i = max{t : s t in G for some s < b_{i-1}}, a_i = min{s : s b_i in G},
// until b_i = b. Throws kNotConnected for disconnected input.
Lace lace_of(const IntervalGraph& g);

// Edges st outside L with lace_of(L + st) = L.
IntervalGraph compatible_edges(const Lace& lace);

// All N-edge laces on [a,b] from the interleaving pattern
// s_1 = a, t_N = b, s_i < s_{i+1} < t_i <= s_{i+2}, t_i < t_{i+1}.
std::vector<Lace> enumerate_laces(int n_edges, int a, int b);
// Same set by filtering all N-edge subsets for minimal connectivity (b - a <= 6).
std::vector<IntervalGraph> enumerate_laces_bruteforce(int n_edges, int a, int b);

// K[a,b] = prod_{a <= s < t <= b} (1 + U_st), evaluated as (1 - beta)^{#coincident pairs}.
template <typename Scalar>
Scalar K_of(const Walk& gamma, int a, int b, const Scalar& beta) {
  if (a < 0 || b > gamma.length() || a > b) throw Error(ErrorCode::kOutOfRange, "K interval");
  Scalar k(1);
  const Scalar u = Scalar(1) - beta;
  for (int s = a; s <= b; ++s) {
    for (int t = s + 1; t <= b; ++t) {
      if (gamma.coincide(s, t)) k *= u;
    }
  }
  return k;
}

// Sum over connected graphs on [a,b] of prod U_st. Only graphs made of
// coincident pairs contribute, so those are the only ones enumerated.
Rational J_bruteforce(const Walk& gamma, int a, int b, const Rational& beta);

struct LaceOptions {
  int n_cap = kMaxIntervalLength;  // laces with more edges are dropped
  bool flip_J2_sign = false;       // mutation mode: negate the N = 2 contribution
};

struct JResult {
  Rational J;
  std::vector<Rational> per_N;  // per_N[N] = J^(N)[a,b], index 0 unused
};
// J[a,b] via the lace resummation, J = sum_N (-1)^N J^(N).
JResult J_via_laces(const Walk& gamma, int a, int b, const Rational& beta, const LaceOptions& opt = {});

struct KJCheck {
  bool holds = true;
  Rational lhs;  // K[0,n]
  Rational rhs;  // K[1,n] + sum_{m=2}^n J[0,m] K[m,n]
};
KJCheck check_KJ_identity(const Walk& gamma, const Rational& beta, const LaceOptions& opt = {});

// Lace coefficients for all walks of length <= n_max, as polynomials in beta:
// count(n, x, N, c) is the number of (walk of length n to x, N-edge lace of
// coincident pairs) whose compatible set contains c coincident pairs, so that
// [lambda^n] Pi^(N)(x) = beta^N sum_c count * (1 - beta)^c.
class PiTable {
 public:
  int dim() const { return d_; }
  int n_max() const { return n_max_; }
  int max_lace_size() const { return max_lace_; }
  std::uint64_t paths_visited() const { return paths_; }

  std::uint64_t count(int n, const LatticePoint& x, int n_edges, int c) const;
  // [lambda^n] Pi^(N)(x), exact.
  Rational coefficient(int N, int n, const LatticePoint& x, const Rational& beta) const;
  SeriesFunction<Rational> series(int N, const Rational& beta) const;
  // Pi^(N) at a given lambda.
  LatticeFunction<double> function(int N, double beta, double lambda) const;

 private:
  friend PiTable enumerate_pi(int d, int n_max, std::uint64_t budget);
  std::size_t slot(int n, std::int64_t ball, int N, int c) const;
  std::int64_t ball_index(const LatticePoint& x) const;

  int d_ = 0;
  int n_max_ = 0;
  int max_lace_ = 0;
  int c_max_ = 0;
  std::int64_t ball_size_ = 0;
  std::vector<std::int32_t> ball_of_box_;
  std::vector<LatticePoint> ball_points_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t paths_ = 0;
};

PiTable enumerate_pi(int d, int n_max, std::uint64_t budget = kDefaultPathBudget);

// Delta^saw = Delta^rw_lambda - sum_{N <= N_cap} (-1)^N Pi^(N), exact series in lambda.
SeriesFunction<Rational> delta_saw_series(const PiTable& table, const Rational& beta, int n_cap);

struct DeltaSaw {
  LatticeFunction<double> delta;
  std::vector<double> pi_norms;  // banach_norm(Pi^(N)), N = 1..N_cap (index 0 unused)
  double tail_estimate = 0.0;    // banach_norm of the last included Pi^(N)
};
DeltaSaw delta_saw(const PiTable& table, double beta, double lambda, int n_cap);

// Bounds from the diagrammatic estimates.

// A^(2)(x) = |x|^{6-3d}; A^(N+1) from A^(N) by the induction step, see the source.
struct ANBound {
  int N = 0;
  LatticeFunction<double> A;
  double sup_ratio_to_A2 = 0.0;  // max_x A^(N)(x) / |x|^{6-3d}
  bool exact = false;            // computed by the full sum rather than the majorant
};
std::vector<ANBound> A_N_bound(int d, int n_max_N, int R, double step_constant);

// sum_{|w| <= R} |w|^{4-2d} |w-u|^{2-d} |w-v|^{2-d} / (|u|^{2-d} |v|^{2-d}).
double triple_sum_check(const LatticePoint& u, const LatticePoint& v, int R);

struct TripleSumScan {
  double sup_ratio = 0.0;
  LatticePoint argmax_u{1};
  LatticePoint argmax_v{1};
  double max_relative_change = 0.0;  // between the two radii, over the grid
  int pairs = 0;
};
// Grid of (u, v) drawn from canonical directions with |u|, |v| <= radius_uv.
TripleSumScan triple_sum_scan(int d, int radius_uv, int R_small, int R_large);

}  // namespace lacelab

#endif  // LACELAB_LACE_HPP
