#include <cmath>
#include <functional>
#include <string>

#include "lace_internal.hpp"
#include "lacelab/lace.hpp"
#include "lacelab/srw.hpp"

namespace lacelab {
namespace {

struct PiEnumerator {
  int n_max;
  int dirs;
  std::vector<std::int64_t> offsets;
  std::vector<std::int64_t> path;       // box index of gamma(t)
  std::vector<int> last_visit;          // per site: latest time, -1 if unvisited
  std::vector<int> prev_same;           // per time: earlier time at the same site, -1 if none
  std::vector<EdgeMask> coinc;          // coincident pairs within [0, t]
  detail::CompatCache cache;
  std::uint64_t nodes = 0;
  std::function<void(int n, std::int64_t site, int N, int c)> record;

  void visit(int n) {
    ++nodes;
    const std::int64_t site = path[static_cast<std::size_t>(n)];
    const EdgeMask cm = coinc[static_cast<std::size_t>(n)];
    // A lace on [0, n] needs a coincident pair ending at n.
    if (n >= 2 && prev_same[static_cast<std::size_t>(n)] >= 0) {
      detail::for_each_lace(
          n, [cm](int s, int t) { return ((cm >> edge_bit(s, t)) & 1) != 0; },
          [&](EdgeMask lace, int N) { record(n, site, N, popcount(cache.get(lace, n) & cm)); });
    }
    if (n == n_max) return;
    for (int e = 0; e < dirs; ++e) {
      const std::int64_t next = site + offsets[static_cast<std::size_t>(e)];
      const int t = n + 1;
      EdgeMask m = cm;
      const int before = last_visit[static_cast<std::size_t>(next)];
      for (int s = before; s >= 0; s = prev_same[static_cast<std::size_t>(s)]) m |= edge_mask(s, t);
      path[static_cast<std::size_t>(t)] = next;
      prev_same[static_cast<std::size_t>(t)] = before;
      last_visit[static_cast<std::size_t>(next)] = t;
      coinc[static_cast<std::size_t>(t)] = m;
      visit(t);
      last_visit[static_cast<std::size_t>(next)] = before;
    }
  }
};

}  // namespace

std::int64_t PiTable::ball_index(const LatticePoint& x) const {
  if (x.dim() != d_) throw Error(ErrorCode::kDimensionMismatch, "PiTable point");
  if (x.linf() > n_max_) return -1;
  return ball_of_box_[static_cast<std::size_t>(Box(d_, n_max_).index(x))];
}

std::size_t PiTable::slot(int n, std::int64_t ball, int N, int c) const {
  return ((static_cast<std::size_t>(n) * static_cast<std::size_t>(ball_size_) + static_cast<std::size_t>(ball)) *
              static_cast<std::size_t>(max_lace_ + 1) +
          static_cast<std::size_t>(N)) *
             static_cast<std::size_t>(c_max_ + 1) +
         static_cast<std::size_t>(c);
}

std::uint64_t PiTable::count(int n, const LatticePoint& x, int n_edges, int c) const {
  if (n < 0 || n > n_max_ || n_edges < 1 || n_edges > max_lace_ || c < 0 || c > c_max_) return 0;
  const std::int64_t b = ball_index(x);
  return b < 0 ? 0 : counts_[slot(n, b, n_edges, c)];
}

Rational PiTable::coefficient(int N, int n, const LatticePoint& x, const Rational& beta) const {
  if (N < 1 || N > max_lace_ || n < 0 || n > n_max_) return Rational(0);
  const std::int64_t b = ball_index(x);
  if (b < 0) return Rational(0);
  const Rational u = Rational(1) - beta;
  Rational acc(0);
  Rational up(1);
  for (int c = 0; c <= c_max_; ++c) {
    const std::uint64_t k = counts_[slot(n, b, N, c)];
    if (k != 0) acc += Rational(mpz_class(std::to_string(k))) * up;
    up *= u;
  }
  return acc.is_zero() ? acc : acc * pow(beta, N);
}

SeriesFunction<Rational> PiTable::series(int N, const Rational& beta) const {
  SeriesFunction<Rational> s(d_, n_max_, n_max_);
  for (int n = 2; n <= n_max_; ++n) {
    for (const LatticePoint& x : ball_points_) {
      if (x.l1() > n) continue;
      const Rational v = coefficient(N, n, x, beta);
      if (!v.is_zero()) s.set_coeff(x, n, v);
    }
  }
  return s;
}

LatticeFunction<double> PiTable::function(int N, double beta, double lambda) const {
  LatticeFunction<double> f(Box(d_, n_max_), n_max_);
  if (N < 1 || N > max_lace_) return f;
  const double bn = std::pow(beta, N);
  for (std::int64_t b = 0; b < ball_size_; ++b) {
    const LatticePoint& x = ball_points_[static_cast<std::size_t>(b)];
    double v = 0.0;
    double lp = 1.0;
    for (int n = 0; n <= n_max_; ++n) {
      double acc = 0.0;
      double up = 1.0;
      for (int c = 0; c <= c_max_; ++c) {
        const std::uint64_t k = counts_[slot(n, b, N, c)];
        if (k != 0) acc += static_cast<double>(k) * up;
        up *= 1.0 - beta;
      }
      v += lp * acc;
      lp *= lambda;
    }
    f.values()[f.box().index(x)] = bn * v;
  }
  return f;
}

PiTable enumerate_pi(int d, int n_max, std::uint64_t budget) {
  if (n_max < 0) throw Error(ErrorCode::kOutOfRange, "negative n_max");
  if (n_max > kMaxIntervalLength) throw Error(ErrorCode::kTooLarge, "lace coefficients limited to n_max <= 15");
  long double total = 0.0L;
  long double term = 1.0L;
  for (int n = 0; n <= n_max; ++n) {
    total += term;
    term *= 2 * d;
  }
  if (total > static_cast<long double>(budget)) {
    throw Error(ErrorCode::kBudgetExceeded, "enumerating " + std::to_string(static_cast<double>(total)) +
                                                " paths exceeds budget " + std::to_string(budget));
  }
  PiTable t;
  t.d_ = d;
  t.n_max_ = n_max;
  t.max_lace_ = std::max(1, n_max - 1);
  t.c_max_ = n_max * (n_max + 1) / 2;
  const Box box(d, n_max);
  t.ball_of_box_.assign(static_cast<std::size_t>(box.size()), -1);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const LatticePoint p = box.point(i);
    if (p.l1() <= n_max) {
      t.ball_of_box_[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(t.ball_points_.size());
      t.ball_points_.push_back(p);
    }
  }
  t.ball_size_ = static_cast<std::int64_t>(t.ball_points_.size());
  const std::size_t slots = static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(t.ball_size_) *
                            static_cast<std::size_t>(t.max_lace_ + 1) * static_cast<std::size_t>(t.c_max_ + 1);
  if (slots > (std::size_t(1) << 25)) throw Error(ErrorCode::kTooLarge, "lace coefficient table too large");
  t.counts_.assign(slots, 0);

  PiEnumerator en;
  en.n_max = n_max;
  en.dirs = 2 * d;
  for (int a = 0; a < d; ++a) {
    en.offsets.push_back(box.stride(a));
    en.offsets.push_back(-box.stride(a));
  }
  en.path.assign(static_cast<std::size_t>(n_max + 1), 0);
  en.prev_same.assign(static_cast<std::size_t>(n_max + 1), -1);
  en.coinc.assign(static_cast<std::size_t>(n_max + 1), 0);
  en.last_visit.assign(static_cast<std::size_t>(box.size()), -1);
  const std::int64_t origin = box.index(LatticePoint(d));
  en.path[0] = origin;
  en.last_visit[static_cast<std::size_t>(origin)] = 0;
  en.record = [&t](int n, std::int64_t site, int N, int c) {
    t.counts_[t.slot(n, t.ball_of_box_[static_cast<std::size_t>(site)], N, c)] += 1;
  };
  en.visit(0);
  t.paths_ = en.nodes;
  return t;
}

SeriesFunction<Rational> delta_saw_series(const PiTable& table, const Rational& beta, int n_cap) {
  SeriesFunction<Rational> out = delta_rw_series(table.dim(), table.n_max());
  for (int N = 1; N <= std::min(n_cap, table.max_lace_size()); ++N) {
    // Delta^saw = Delta^rw - sum_N (-1)^N Pi^(N)
    out.axpy(N % 2 == 0 ? Rational(-1) : Rational(1), table.series(N, beta));
  }
  return out;
}

DeltaSaw delta_saw(const PiTable& table, double beta, double lambda, int n_cap) {
  const int d = table.dim();
  DeltaSaw res{delta_rw<double>(d, lambda, table.n_max()), {}, 0.0};
  res.pi_norms.assign(static_cast<std::size_t>(n_cap + 1), 0.0);
  for (int N = 1; N <= n_cap; ++N) {
    const LatticeFunction<double> pi = table.function(N, beta, lambda);
    res.pi_norms[static_cast<std::size_t>(N)] = banach_norm(pi);
    res.delta.axpy(N % 2 == 0 ? -1.0 : 1.0, pi);
  }
  res.tail_estimate = n_cap >= 1 ? res.pi_norms.back() : 0.0;
  return res;
}

}  // namespace lacelab
