#include "lacelab/lace.hpp"

#include <algorithm>
#include <array>

#include "lace_internal.hpp"

namespace lacelab {
namespace detail {

// Largest right endpoint per left endpoint; -1 where no edge starts.
static std::array<int, kMaxIntervalLength + 1> reach_table(EdgeMask mask, int len) {
  std::array<int, kMaxIntervalLength + 1> reach{};
  reach.fill(-1);
  for (int j = 1; j <= len; ++j) {
    for (int i = 0; i < j; ++i) {
      if ((mask >> edge_bit(i, j)) & 1) reach[static_cast<std::size_t>(i)] = std::max(reach[static_cast<std::size_t>(i)], j);
    }
  }
  return reach;
}

bool connected_mask(EdgeMask mask, int len) {
  if (len < 1 || mask == 0) return false;
  const auto reach = reach_table(mask, len);
  if (reach[0] < 0) return false;
  bool ends_at_b = false;
  for (int i = 0; i < len; ++i) ends_at_b = ends_at_b || ((mask >> edge_bit(i, len)) & 1);
  if (!ends_at_b) return false;
  int covered = -1;  // max t over edges with s < c
  for (int c = 1; c < len; ++c) {
    covered = std::max(covered, reach[static_cast<std::size_t>(c - 1)]);
    if (covered <= c) return false;
  }
  return true;
}

bool lace_of_mask(EdgeMask mask, int len, EdgeMask& out, std::vector<Edge>* elements) {
  if (!connected_mask(mask, len)) return false;
  const auto reach = reach_table(mask, len);
  out = 0;
  int b_prev = reach[0];
  out |= edge_mask(0, b_prev);
  if (elements) elements->push_back({0, b_prev});
  while (b_prev < len) {
    int b_i = -1;
    for (int s = 0; s < b_prev; ++s) b_i = std::max(b_i, reach[static_cast<std::size_t>(s)]);
    if (b_i <= b_prev) throw Error(ErrorCode::kNotConnected, "lace extraction stalled");
    int a_i = -1;
    for (int s = 0; s < b_i; ++s) {
      if ((mask >> edge_bit(s, b_i)) & 1) {
        a_i = s;
        break;
      }
    }
    out |= edge_mask(a_i, b_i);
    if (elements) elements->push_back({a_i, b_i});
    b_prev = b_i;
  }
  return true;
}

EdgeMask full_mask(int len) {
  EdgeMask m = 0;
  for (int j = 1; j <= len; ++j) {
    for (int i = 0; i < j; ++i) m |= edge_mask(i, j);
  }
  return m;
}

EdgeMask compatible_mask(EdgeMask lace, int len) {
  EdgeMask out = 0;
  for (int j = 1; j <= len; ++j) {
    for (int i = 0; i < j; ++i) {
      const EdgeMask e = edge_mask(i, j);
      if (lace & e) continue;
      EdgeMask got = 0;
      lace_of_mask(lace | e, len, got, nullptr);
      if (got == lace) out |= e;
    }
  }
  return out;
}

EdgeMask CompatCache::get(EdgeMask lace, int len) {
  const Key k{lace, len};
  auto it = map_.find(k);
  if (it != map_.end()) return it->second;
  const EdgeMask m = compatible_mask(lace, len);
  map_.emplace(k, m);
  return m;
}

}  // namespace detail

using detail::edge_mask;

IntervalGraph::IntervalGraph(int a, int b) : a_(a), b_(b) {
  if (a > b) throw Error(ErrorCode::kOutOfRange, "interval with a > b");
  if (b - a > kMaxIntervalLength) throw Error(ErrorCode::kTooLarge, "interval longer than " + std::to_string(kMaxIntervalLength));
}

IntervalGraph::IntervalGraph(int a, int b, const std::vector<Edge>& edges) : IntervalGraph(a, b) {
  for (const auto& [s, t] : edges) add(s, t);
}

IntervalGraph IntervalGraph::from_mask(int a, int b, EdgeMask mask) {
  IntervalGraph g(a, b);
  if (mask & ~detail::full_mask(b - a)) throw Error(ErrorCode::kOutOfRange, "edge mask beyond interval");
  g.mask_ = mask;
  return g;
}

void IntervalGraph::check(int s, int t) const {
  if (!(a_ <= s && s < t && t <= b_)) {
    throw Error(ErrorCode::kOutOfRange, "edge " + std::to_string(s) + std::to_string(t) + " outside [a,b] or s >= t");
  }
}

void IntervalGraph::add(int s, int t) {
  check(s, t);
  mask_ |= edge_mask(s - a_, t - a_);
}

void IntervalGraph::remove(int s, int t) {
  check(s, t);
  mask_ &= ~edge_mask(s - a_, t - a_);
}

bool IntervalGraph::contains(int s, int t) const {
  if (!(a_ <= s && s < t && t <= b_)) return false;
  return (mask_ & edge_mask(s - a_, t - a_)) != 0;
}

std::vector<Edge> IntervalGraph::edges() const {
  std::vector<Edge> out;
  for (int s = a_; s <= b_; ++s) {
    for (int t = s + 1; t <= b_; ++t) {
      if (contains(s, t)) out.push_back({s, t});
    }
  }
  return out;
}

std::string IntervalGraph::str() const {
  std::string s = "[" + std::to_string(a_) + "," + std::to_string(b_) + "]{";
  bool first = true;
  for (const auto& [x, y] : edges()) {
    s += (first ? "" : " ") + std::to_string(x) + "-" + std::to_string(y);
    first = false;
  }
  return s + "}";
}

bool is_connected(const IntervalGraph& g) { return detail::connected_mask(g.mask(), g.b() - g.a()); }

bool is_minimally_connected(const IntervalGraph& g) {
  const int len = g.b() - g.a();
  if (!detail::connected_mask(g.mask(), len)) return false;
  for (const auto& [s, t] : g.edges()) {
    if (detail::connected_mask(g.mask() & ~edge_mask(s - g.a(), t - g.a()), len)) return false;
  }
  return true;
}

Lace lace_of(const IntervalGraph& g) {
  const int len = g.b() - g.a();
  EdgeMask m = 0;
  std::vector<Edge> local;
  if (!detail::lace_of_mask(g.mask(), len, m, &local)) {
    throw Error(ErrorCode::kNotConnected, "lace_of needs a connected graph, got " + g.str());
  }
  Lace lace{IntervalGraph::from_mask(g.a(), g.b(), m), {}};
  for (const auto& [i, j] : local) lace.elements.push_back({i + g.a(), j + g.a()});
  if (!is_minimally_connected(lace.graph)) {
    throw Error(ErrorCode::kNotConnected, "extracted graph " + lace.graph.str() + " is not a lace");
  }
  return lace;
}

IntervalGraph compatible_edges(const Lace& lace) {
  const IntervalGraph& g = lace.graph;
  return IntervalGraph::from_mask(g.a(), g.b(), detail::compatible_mask(g.mask(), g.b() - g.a()));
}

std::vector<Lace> enumerate_laces(int n_edges, int a, int b) {
  if (n_edges < 1 || b - a < 1) throw Error(ErrorCode::kOutOfRange, "enumerate_laces needs N >= 1 and b > a");
  const int len = b - a;
  if (len > kMaxIntervalLength) throw Error(ErrorCode::kTooLarge, "interval too long");
  std::vector<Lace> out;
  detail::for_each_lace(len, [](int, int) { return true; }, [&](EdgeMask m, int n) {
    if (n == n_edges) out.push_back(lace_of(IntervalGraph::from_mask(a, b, m)));
  });
  std::sort(out.begin(), out.end(), [](const Lace& x, const Lace& y) { return x.elements < y.elements; });
  return out;
}

std::vector<IntervalGraph> enumerate_laces_bruteforce(int n_edges, int a, int b) {
  const int len = b - a;
  if (len > 6) throw Error(ErrorCode::kTooLarge, "brute-force lace enumeration limited to b - a <= 6");
  std::vector<EdgeMask> all;
  for (int j = 1; j <= len; ++j) {
    for (int i = 0; i < j; ++i) all.push_back(edge_mask(i, j));
  }
  std::vector<IntervalGraph> out;
  const int e = static_cast<int>(all.size());
  // Walk over all subsets of size n_edges in lexicographic order of indices.
  if (n_edges > e) return out;
  std::vector<int> idx(static_cast<std::size_t>(n_edges));
  for (int i = 0; i < n_edges; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    EdgeMask m = 0;
    for (int i : idx) m |= all[static_cast<std::size_t>(i)];
    IntervalGraph g = IntervalGraph::from_mask(a, b, m);
    if (is_minimally_connected(g)) out.push_back(g);
    int k = n_edges - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == e - n_edges + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int i = k + 1; i < n_edges; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return out;
}

namespace {

EdgeMask coincidence_mask(const Walk& gamma, int a, int b) {
  EdgeMask m = 0;
  for (int s = a; s <= b; ++s) {
    for (int t = s + 1; t <= b; ++t) {
      if (gamma.coincide(s, t)) m |= edge_mask(s - a, t - a);
    }
  }
  return m;
}

void check_segment(const Walk& gamma, int a, int b) {
  if (a < 0 || b > gamma.length() || a >= b) throw Error(ErrorCode::kOutOfRange, "walk segment [a,b]");
  if (b - a > kMaxIntervalLength) throw Error(ErrorCode::kTooLarge, "walk segment longer than 15");
}

}  // namespace

Rational J_bruteforce(const Walk& gamma, int a, int b, const Rational& beta) {
  check_segment(gamma, a, b);
  if (b - a > 6) throw Error(ErrorCode::kTooLarge, "J_bruteforce limited to b - a <= 6");
  const int len = b - a;
  std::vector<EdgeMask> coinc;
  const EdgeMask cm = coincidence_mask(gamma, a, b);
  for (int j = 1; j <= len; ++j) {
    for (int i = 0; i < j; ++i) {
      if (cm & edge_mask(i, j)) coinc.push_back(edge_mask(i, j));
    }
  }
  // prod U over a graph of k coincident pairs is (-beta)^k; graphs using any
  // other pair vanish.
  std::vector<Rational> pw(coinc.size() + 1, Rational(1));
  for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * (-beta);
  Rational J(0);
  const std::uint64_t subsets = std::uint64_t(1) << coinc.size();
  for (std::uint64_t sub = 1; sub < subsets; ++sub) {
    EdgeMask m = 0;
    for (std::size_t i = 0; i < coinc.size(); ++i) {
      if ((sub >> i) & 1) m |= coinc[i];
    }
    if (detail::connected_mask(m, len)) J += pw[static_cast<std::size_t>(std::popcount(sub))];
  }
  return J;
}

JResult J_via_laces(const Walk& gamma, int a, int b, const Rational& beta, const LaceOptions& opt) {
  check_segment(gamma, a, b);
  const int len = b - a;
  const EdgeMask cm = coincidence_mask(gamma, a, b);
  thread_local detail::CompatCache cache;
  std::vector<int> hits;  // hits[N * stride + c]
  const int c_max = len * (len + 1) / 2;
  const int stride = c_max + 1;
  hits.assign(static_cast<std::size_t>((len + 1) * stride), 0);
  int max_n = 0;
  detail::for_each_lace(
      len, [cm](int s, int t) { return ((cm >> detail::edge_bit(s, t)) & 1) != 0; },
      [&](EdgeMask lace, int n) {
        if (n > opt.n_cap) return;
        const int c = popcount(cache.get(lace, len) & cm);
        ++hits[static_cast<std::size_t>(n * stride + c)];
        max_n = std::max(max_n, n);
      });
  JResult res;
  res.per_N.assign(static_cast<std::size_t>(std::max(max_n, 1) + 1), Rational(0));
  const Rational u = Rational(1) - beta;
  std::vector<Rational> upow(static_cast<std::size_t>(c_max + 1), Rational(1));
  for (int c = 1; c <= c_max; ++c) upow[static_cast<std::size_t>(c)] = upow[static_cast<std::size_t>(c - 1)] * u;
  Rational bpow(1);
  for (int n = 1; n <= max_n; ++n) {
    bpow *= beta;
    Rational acc(0);
    for (int c = 0; c <= c_max; ++c) {
      const int h = hits[static_cast<std::size_t>(n * stride + c)];
      if (h != 0) acc += Rational(h) * upow[static_cast<std::size_t>(c)];
    }
    res.per_N[static_cast<std::size_t>(n)] = bpow * acc;
  }
  for (int n = 1; n <= max_n; ++n) {
    Rational term = res.per_N[static_cast<std::size_t>(n)];
    if (opt.flip_J2_sign && n == 2) term = -term;
    res.J += (n % 2 == 0) ? term : -term;
  }
  return res;
}

KJCheck check_KJ_identity(const Walk& gamma, const Rational& beta, const LaceOptions& opt) {
  const int n = gamma.length();
  if (n < 1) throw Error(ErrorCode::kOutOfRange, "KJ identity needs a walk of length >= 1");
  KJCheck r;
  r.lhs = K_of(gamma, 0, n, beta);
  r.rhs = K_of(gamma, 1, n, beta);
  for (int m = 2; m <= n; ++m) {
    const Rational J = J_via_laces(gamma, 0, m, beta, opt).J;
    if (!J.is_zero()) r.rhs += J * K_of(gamma, m, n, beta);
  }
  r.holds = r.lhs == r.rhs;
  return r;
}

}  // namespace lacelab
