#include "lacelab/wsaw.hpp"

#include <cmath>
#include <limits>

#include "lacelab/srw.hpp"

namespace lacelab {

Walk::Walk(int dim) : dim_(dim) {
  points_.emplace_back(dim);
  visits_[points_.back()] = 1;
}

Walk Walk::from_steps(int dim, const std::vector<int>& steps) {
  Walk w(dim);
  for (int s : steps) w.push_step(s);
  return w;
}

Walk Walk::from_points(const std::vector<LatticePoint>& points) {
  if (points.empty() || !points.front().is_origin()) throw Error(ErrorCode::kOutOfRange, "walk must start at 0");
  const int d = points.front().dim();
  Walk w(d);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const LatticePoint diff = points[i] - points[i - 1];
    if (diff.l1() != 1) throw Error(ErrorCode::kOutOfRange, "consecutive points are not neighbours");
    for (int a = 0; a < d; ++a) {
      if (diff[a] != 0) w.push_step(2 * a + (diff[a] > 0 ? 0 : 1));
    }
  }
  return w;
}

void Walk::push_step(int direction) {
  if (direction < 0 || direction >= 2 * dim_) throw Error(ErrorCode::kOutOfRange, "step direction");
  LatticePoint next = points_.back();
  next[direction / 2] += (direction % 2 == 0) ? 1 : -1;
  int& v = visits_[next];
  intersections_ += v;
  ++v;
  points_.push_back(next);
}

int Walk::visits(const LatticePoint& p) const {
  const auto it = visits_.find(p);
  return it == visits_.end() ? 0 : it->second;
}

std::string Walk::str() const {
  std::string s;
  for (std::size_t i = 0; i < points_.size(); ++i) s += (i ? " " : "") + points_[i].str();
  return s;
}

std::int64_t CnTable::ball_index(const LatticePoint& x) const {
  if (x.dim() != d_) throw Error(ErrorCode::kDimensionMismatch, "CnTable point");
  if (x.linf() > n_max_) return -1;
  return ball_of_box_[static_cast<std::size_t>(Box(d_, n_max_).index(x))];
}

std::uint64_t CnTable::count(int n, const LatticePoint& x, int k) const {
  if (n < 0 || n > n_max_ || k < 0 || k > k_max_) return 0;
  const std::int64_t b = ball_index(x);
  return b < 0 ? 0 : counts_[slot(n, b, k)];
}

std::uint64_t CnTable::total_count(int n) const {
  std::uint64_t t = 0;
  for (std::int64_t b = 0; b < ball_size_; ++b) {
    for (int k = 0; k <= k_max_; ++k) t += counts_[slot(n, b, k)];
  }
  return t;
}

namespace {

template <typename Scalar>
std::vector<Scalar> powers_of(const Scalar& u, int k_max) {
  std::vector<Scalar> p(static_cast<std::size_t>(k_max + 1), Scalar(1));
  for (int k = 1; k <= k_max; ++k) p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k - 1)] * u;
  return p;
}

template <typename Scalar>
Scalar from_count(std::uint64_t c) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return Rational(mpz_class(std::to_string(c)));
  } else {
    return static_cast<Scalar>(c);
  }
}

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::kOutOfRange, "beta outside [0, 1]");
}

}  // namespace

template <typename Scalar>
Scalar CnTable::cn(int n, const LatticePoint& x, const Scalar& beta) const {
  check_beta(to_double(beta));
  const std::int64_t b = ball_index(x);
  if (n < 0 || n > n_max_ || b < 0) return Scalar(0);
  const auto pw = powers_of<Scalar>(Scalar(1) - beta, k_max_);
  Scalar s(0);
  for (int k = 0; k <= k_max_; ++k) {
    const std::uint64_t c = counts_[slot(n, b, k)];
    if (c != 0) s += from_count<Scalar>(c) * pw[static_cast<std::size_t>(k)];
  }
  return s;
}

template <typename Scalar>
LatticeFunction<Scalar> CnTable::cn_function(int n, const Scalar& beta) const {
  check_beta(to_double(beta));
  if (n < 0 || n > n_max_) throw Error(ErrorCode::kOutOfRange, "n beyond table");
  const auto pw = powers_of<Scalar>(Scalar(1) - beta, k_max_);
  LatticeFunction<Scalar> f(Box(d_, n), n_max_);
  for (std::int64_t b = 0; b < ball_size_; ++b) {
    const LatticePoint& x = ball_points_[static_cast<std::size_t>(b)];
    if (x.l1() > n) continue;
    Scalar s(0);
    for (int k = 0; k <= k_max_; ++k) {
      const std::uint64_t c = counts_[slot(n, b, k)];
      if (c != 0) s += from_count<Scalar>(c) * pw[static_cast<std::size_t>(k)];
    }
    f.values()[f.box().index(x)] = s;
  }
  return f;
}

template <typename Scalar>
Scalar CnTable::cn_total(int n, const Scalar& beta) const {
  return cn_function<Scalar>(n, beta).sum();
}

SeriesFunction<Rational> CnTable::series(const Rational& beta) const {
  SeriesFunction<Rational> s(d_, n_max_, n_max_);
  for (int n = 0; n <= n_max_; ++n) {
    cn_function<Rational>(n, beta).for_each_nonzero(
        [&](const LatticePoint& x, const Rational& v) { s.set_coeff(x, n, v); });
  }
  return s;
}

template Rational CnTable::cn<Rational>(int, const LatticePoint&, const Rational&) const;
template double CnTable::cn<double>(int, const LatticePoint&, const double&) const;
template LatticeFunction<Rational> CnTable::cn_function<Rational>(int, const Rational&) const;
template LatticeFunction<double> CnTable::cn_function<double>(int, const double&) const;
template Rational CnTable::cn_total<Rational>(int, const Rational&) const;
template double CnTable::cn_total<double>(int, const double&) const;

namespace {

struct Enumerator {
  int n_max;
  int dirs;
  std::vector<std::int64_t> offsets;
  const std::int32_t* ball_of_box;
  std::uint8_t* visits;
  std::uint64_t* counts;
  std::size_t ball_size;
  std::size_t k_stride;
  std::uint64_t nodes = 0;

  void run(std::int64_t pos, int n, int k) {
    ++nodes;
    counts[(static_cast<std::size_t>(n) * ball_size + static_cast<std::size_t>(ball_of_box[pos])) * k_stride +
           static_cast<std::size_t>(k)] += 1;
    if (n == n_max) return;
    for (int e = 0; e < dirs; ++e) {
      const std::int64_t next = pos + offsets[static_cast<std::size_t>(e)];
      const int v = visits[next];
      visits[next] = static_cast<std::uint8_t>(v + 1);
      run(next, n + 1, k + v);
      visits[next] = static_cast<std::uint8_t>(v);
    }
  }
};

}  // namespace

CnTable enumerate_cn(int d, int n_max, std::uint64_t budget) {
  if (n_max < 0) throw Error(ErrorCode::kOutOfRange, "negative n_max");
  if (n_max > 250) throw Error(ErrorCode::kTooLarge, "n_max too large for enumeration");
  // Total number of paths up to length n_max; refuse up front rather than mid-run.
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
  CnTable t;
  t.d_ = d;
  t.n_max_ = n_max;
  t.k_max_ = n_max * (n_max + 1) / 2;
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
  t.counts_.assign(static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(t.ball_size_) *
                       static_cast<std::size_t>(t.k_max_ + 1),
                   0);
  std::vector<std::uint8_t> visits(static_cast<std::size_t>(box.size()), 0);
  Enumerator en{n_max, 2 * d, {}, t.ball_of_box_.data(), visits.data(), t.counts_.data(),
                static_cast<std::size_t>(t.ball_size_), static_cast<std::size_t>(t.k_max_ + 1)};
  for (int a = 0; a < d; ++a) {
    en.offsets.push_back(box.stride(a));
    en.offsets.push_back(-box.stride(a));
  }
  const std::int64_t origin = box.index(LatticePoint(d));
  visits[static_cast<std::size_t>(origin)] = 1;
  en.run(origin, 0, 0);
  t.paths_ = en.nodes;
  return t;
}

template <typename Scalar>
LatticeFunction<Scalar> green_saw(const CnTable& table, const Scalar& beta, const Scalar& lambda) {
  LatticeFunction<Scalar> g(Box(table.dim(), table.n_max()), table.n_max());
  Scalar lp(1);
  for (int n = 0; n <= table.n_max(); ++n) {
    g.axpy(lp, table.cn_function<Scalar>(n, beta));
    lp *= lambda;
  }
  return g;
}

template LatticeFunction<Rational> green_saw<Rational>(const CnTable&, const Rational&, const Rational&);
template LatticeFunction<double> green_saw<double>(const CnTable&, const double&, const double&);

Susceptibility susceptibility(const CnTable& table, double beta, double lambda) {
  Susceptibility s;
  double lp = 1.0;
  double last = 0.0;
  double prev = 0.0;
  for (int n = 0; n <= table.n_max(); ++n) {
    const double c = table.cn_total<double>(n, beta);
    s.value += lp * c;
    if (n >= 1) s.derivative += n * c * std::pow(lambda, n - 1);
    lp *= lambda;
    prev = last;
    last = c;
  }
  if (table.n_max() >= 1 && prev > 0.0) {
    const double r = last / prev;
    const double q = lambda * r;
    s.tail_estimate = q < 1.0 ? std::pow(lambda, table.n_max()) * last * q / (1.0 - q)
                              : std::numeric_limits<double>::infinity();
  }
  return s;
}

Rational susceptibility_exact(const CnTable& table, const Rational& beta, const Rational& lambda) {
  Rational s(0);
  Rational lp(1);
  for (int n = 0; n <= table.n_max(); ++n) {
    s += lp * table.cn_total<Rational>(n, beta);
    lp *= lambda;
  }
  return s;
}

double lambda_c_estimate(const CnTable& table, double beta) {
  if (table.n_max() < 2) throw Error(ErrorCode::kOutOfRange, "need n_max >= 2 for a ratio estimate");
  const double a = table.cn_total<double>(table.n_max(), beta);
  const double b = table.cn_total<double>(table.n_max() - 1, beta);
  return a > 0.0 ? b / a : std::numeric_limits<double>::infinity();
}

bool CnCheckReport::pointwise_all(int n_from) const {
  for (const auto& r : rows) {
    if (r.n >= n_from && !r.pointwise_holds) return false;
  }
  return true;
}

CnCheckReport check_cn_submultiplicativity(const CnTable& table, const Rational& beta) {
  const int d = table.dim();
  const int n_max = table.n_max();
  CnCheckReport rep;
  rep.beta = beta;
  std::vector<LatticeFunction<Rational>> c;
  for (int n = 0; n <= n_max; ++n) {
    LatticeFunction<Rational> f = table.cn_function<Rational>(n, beta);
    c.emplace_back(f.box(), n_max + 1, f.values());
  }
  const LatticeFunction<Rational> nbr = Rational(2 * d) * step_kernel<Rational>(d, n_max + 1);
  std::vector<Rational> totals;
  for (int n = 0; n <= n_max; ++n) totals.push_back(c[static_cast<std::size_t>(n)].sum());

  for (int n = 1; n <= n_max; ++n) {
    CnCheckRow row;
    row.n = n;
    LatticeFunction<Rational> literal(d, n_max + 1);
    LatticeFunction<Rational> split(d, n_max + 1);
    Rational summed(0);
    for (int m = 0; m <= n - 1; ++m) {
      const auto& a = c[static_cast<std::size_t>(m)];
      const auto& b = c[static_cast<std::size_t>(n - 1 - m)];
      const LatticeFunction<Rational> ab = convolve(a, b);
      literal += ab;
      split += convolve(ab, nbr);
      summed += totals[static_cast<std::size_t>(m)] * totals[static_cast<std::size_t>(n - 1 - m)];
    }
    literal *= Rational(2 * d);
    const LatticeFunction<Rational> lhs = Rational(n) * c[static_cast<std::size_t>(n)];
    const Box box(d, n);
    bool first = true;
    for (std::int64_t i = 0; i < box.size(); ++i) {
      const LatticePoint x = box.point(i);
      const Rational l = lhs(x);
      if (row.literal_holds && l > literal(x)) {
        row.literal_holds = false;
        row.literal_witness = x;
      }
      const Rational slack = split(x) - l;
      if (first || slack < row.pointwise_min_slack) {
        row.pointwise_min_slack = slack;
        row.pointwise_witness = x;
        first = false;
      }
    }
    row.pointwise_holds = row.pointwise_min_slack >= Rational(0);
    row.summed_slack = Rational(2 * d) * summed - Rational(n) * totals[static_cast<std::size_t>(n)];
    row.summed_holds = row.summed_slack >= Rational(0);
    rep.rows.push_back(row);
  }
  return rep;
}

BootstrapPoint bootstrap_ratio(const CnTable& table, double beta, double lambda, const LatticeFunction<double>& grw) {
  if (grw.dim() != table.dim()) throw Error(ErrorCode::kDimensionMismatch, "bootstrap_ratio");
  const LatticeFunction<double> gs = green_saw<double>(table, beta, lambda);
  BootstrapPoint bp;
  bp.lambda = lambda;
  bp.argmax = LatticePoint(table.dim());
  const Box& box = grw.box();
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const double den = grw.values()[i];
    if (den <= 0.0) continue;
    const LatticePoint x = box.point(i);
    const double r = gs(x) / den;
    if (r > bp.ratio) {
      bp.ratio = r;
      bp.argmax = x;
    }
  }
  return bp;
}

}  // namespace lacelab
