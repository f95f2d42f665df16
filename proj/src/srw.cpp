#include "lacelab/srw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/QR>

#include "lacelab/lattice_io.hpp"

namespace lacelab {
namespace {

// Splits n steps among coordinates: with k coordinates left, m of the n steps go
// to coordinate k with binomial probability, the rest to the first k-1.
class StepSplitter {
 public:
  StepSplitter(int d, int n_max, int max_coord) : d_(d), n_max_(n_max), max_coord_(max_coord) {
    lfact_.resize(n_max + 1);
    lfact_[0] = 0.0;
    for (int i = 1; i <= n_max; ++i) lfact_[i] = lfact_[i - 1] + std::log(static_cast<double>(i));
    q_ = Eigen::ArrayXXd::Zero(n_max + 1, max_coord + 1);
    for (int m = 0; m <= n_max; ++m) {
      for (int y = 0; y <= std::min(m, max_coord); ++y) {
        if ((m - y) % 2 != 0) continue;
        q_(m, y) = std::exp(lfact_[m] - lfact_[(m + y) / 2] - lfact_[(m - y) / 2] - m * std::numbers::ln2);
      }
    }
    weights_.resize(d + 1);
    for (int k = 2; k <= d; ++k) {
      Eigen::ArrayXXd& w = weights_[k];
      w = Eigen::ArrayXXd::Zero(n_max + 1, n_max + 1);
      const double lp = std::log(1.0 / k);
      const double lr = std::log(1.0 - 1.0 / k);
      for (int n = 0; n <= n_max; ++n) {
        for (int m = 0; m <= n; ++m) {
          w(n, m) = std::exp(lfact_[n] - lfact_[m] - lfact_[n - m] + m * lp + (n - m) * lr);
        }
      }
    }
  }

  // prev holds P_{k-1}(n) for the first k-1 coordinates; returns P_k(n) after
  // adding coordinate k at position y.
  void extend(int k, int y, const Eigen::ArrayXd& prev, Eigen::ArrayXd& out) const {
    y = std::abs(y);
    out.setZero(n_max_ + 1);
    if (k == 1) {
      for (int n = 0; n <= n_max_; ++n) out[n] = q_(n, y);
      return;
    }
    const Eigen::ArrayXXd& w = weights_[k];
    for (int n = 0; n <= n_max_; ++n) {
      double acc = 0.0;
      for (int m = y; m <= n; m += 2) acc += w(n, m) * q_(m, y) * prev[n - m];
      out[n] = acc;
    }
  }

  int max_coord() const { return max_coord_; }
  int dim() const { return d_; }

 private:
  int d_;
  int n_max_;
  int max_coord_;
  std::vector<double> lfact_;
  Eigen::ArrayXXd q_;
  std::vector<Eigen::ArrayXXd> weights_;
};

bool is_critical(int d, double mu) { return std::abs(mu - 1.0 / (2 * d)) <= 1e-15; }

void check_mu(int d, double mu) {
  const double top = 1.0 / (2 * d);
  if (!(mu >= -top - 1e-15 && mu <= top + 1e-15)) {
    throw Error(ErrorCode::kOutOfRange, "mu = " + std::to_string(mu) + " outside [-1/(2d), 1/(2d)]");
  }
  if (is_critical(d, mu) && d <= 2) {
    throw Error(ErrorCode::kOutOfRange, "critical Green's function diverges for d <= 2");
  }
}

// Partial sum plus tail for one orbit, from a row p_0..p_N.
double critical_value(const Eigen::Ref<const Eigen::ArrayXd>& row, int last, int d, const LatticePoint& x) {
  return row.head(last + 1).sum() + critical_tail(d, x.norm2(), x.l1() % 2, last);
}

}  // namespace

LatticeFunction<Rational> pn_exact(int d, int n) {
  if (n < 0) throw Error(ErrorCode::kOutOfRange, "negative step count");
  const auto dir = cache_directory();
  auto path_for = [&](int k) {
    return *dir / ("pn_d" + std::to_string(d) + "_n" + std::to_string(k) + "_exact.csv");
  };
  int start = 0;
  LatticeFunction<Rational> p = delta0<Rational>(d, n);
  if (dir) {
    for (int k = n; k > 0; --k) {
      if (std::filesystem::exists(path_for(k))) {
        p = load_function<Rational>(path_for(k)).resized(k);
        start = k;
        break;
      }
    }
  }
  const LatticeFunction<Rational> step = step_kernel<Rational>(d);
  for (int k = start + 1; k <= n; ++k) {
    LatticeFunction<Rational> grown(p.box(), k, p.values());
    p = convolve(grown, step);
    if (dir) save_function(path_for(k), p);
  }
  return LatticeFunction<Rational>(p.box(), n, p.values());
}

LatticeFunction<double> pn_float(int d, int n) {
  if (n < 0) throw Error(ErrorCode::kOutOfRange, "negative step count");
  LatticeFunction<double> p = delta0<double>(d, n);
  const LatticeFunction<double> step = step_kernel<double>(d, n);
  for (int k = 1; k <= n; ++k) p = convolve(p, step);
  return p;
}

SeriesFunction<Rational> green_rw_series(int d, int n_max) {
  std::vector<LatticeFunction<Rational>> counts;
  counts.push_back(delta0<Rational>(d, n_max));
  LatticeFunction<Rational> nbr = Rational(2 * d) * step_kernel<Rational>(d, n_max);
  for (int n = 1; n <= n_max; ++n) counts.push_back(convolve(counts.back(), nbr));
  return SeriesFunction<Rational>::from_coefficients(counts);
}

SeriesFunction<Rational> delta_rw_series(int d, int n_max) {
  SeriesFunction<Rational> s = series_delta0<Rational>(d, n_max);
  if (n_max >= 1) {
    for (int i = 0; i < d; ++i) {
      s.set_coeff(LatticePoint::unit(d, i, 1), 1, Rational(-1));
      s.set_coeff(LatticePoint::unit(d, i, -1), 1, Rational(-1));
    }
  }
  return s;
}

SrwKernelTable::SrwKernelTable(int d, int radius, int n_max)
    : d_(d), radius_(radius), n_max_(n_max), reps_(canonical_points(d, radius)) {
  if (n_max < 0 || radius < 0) throw Error(ErrorCode::kOutOfRange, "SrwKernelTable parameters");
  const StepSplitter split(d, n_max, radius);
  table_.resize(static_cast<Eigen::Index>(reps_.size()), n_max + 1);
  const Box box(d, radius);
  // Representatives come in lexicographic order, so a stack of partial results
  // lets consecutive points share their common coordinate prefix.
  std::vector<Eigen::ArrayXd> stack(static_cast<std::size_t>(d + 1), Eigen::ArrayXd::Zero(n_max + 1));
  stack[0][0] = 1.0;
  LatticePoint prev(d);
  for (std::size_t r = 0; r < reps_.size(); ++r) {
    const LatticePoint& x = reps_[r];
    int first = 0;
    if (r > 0) {
      while (first < d && x[first] == prev[first]) ++first;
    }
    for (int k = first; k < d; ++k) {
      split.extend(k + 1, x[k], stack[static_cast<std::size_t>(k)], stack[static_cast<std::size_t>(k + 1)]);
    }
    table_.row(static_cast<Eigen::Index>(r)) = stack[static_cast<std::size_t>(d)].transpose();
    rep_of_.emplace(box.index(x), r);
    prev = x;
  }
}

Eigen::Ref<const Eigen::ArrayXd> SrwKernelTable::row(const LatticePoint& canonical) const {
  const auto it = rep_of_.find(Box(d_, radius_).index(canonical));
  if (it == rep_of_.end() || !canonical.is_canonical() || canonical.linf() > radius_) {
    throw Error(ErrorCode::kOutOfRange, "no table row for " + canonical.str());
  }
  return row(it->second);
}

double SrwKernelTable::p(int n, const LatticePoint& x) const {
  if (n < 0 || n > n_max_) throw Error(ErrorCode::kOutOfRange, "step count beyond table");
  if (x.linf() > radius_) throw Error(ErrorCode::kOutOfRange, "point beyond table radius");
  return row(x.canonical())[n];
}

Eigen::ArrayXd pn_point(const LatticePoint& x, int n_max) {
  const int d = x.dim();
  const LatticePoint c = x.canonical();
  const StepSplitter split(d, n_max, c.linf());
  Eigen::ArrayXd cur = Eigen::ArrayXd::Zero(n_max + 1);
  cur[0] = 1.0;
  Eigen::ArrayXd next;
  for (int k = 0; k < d; ++k) {
    split.extend(k + 1, c[k], cur, next);
    std::swap(cur, next);
  }
  return cur;
}

double critical_tail(int d, std::int64_t norm2, int l1_parity, int n_max) {
  int n0 = n_max + 1;
  if (n0 % 2 != l1_parity) ++n0;
  const double s = 0.5 * d;
  const double amp = 2.0 * std::pow(d / (2.0 * std::numbers::pi), s);
  const double a = 0.5 * d * static_cast<double>(norm2);
  auto f = [&](double n) { return amp * std::pow(n, -s) * std::exp(-a / n); };
  // Integral over n >= n0 after u = 1/n = t^2: 2 amp int_0^{1/sqrt(n0)} t^{2s-3} e^{-a t^2} dt.
  const int intervals = 400;
  const double top = 1.0 / std::sqrt(static_cast<double>(n0));
  const double h = top / intervals;
  auto g = [&](double t) { return t == 0.0 ? (2 * s - 3 == 0 ? 1.0 : 0.0) : std::pow(t, 2 * s - 3) * std::exp(-a * t * t); };
  double simpson = g(0.0) + g(top);
  for (int i = 1; i < intervals; ++i) simpson += (i % 2 ? 4.0 : 2.0) * g(i * h);
  const double integral = 2.0 * amp * simpson * h / 3.0;
  // Euler-Maclaurin for the step-2 sum over n0, n0+2, ...
  const double fn0 = f(n0);
  const double dfn0 = fn0 * (-s / n0 + a / (static_cast<double>(n0) * n0));
  return 0.5 * integral + 0.5 * fn0 - (2.0 / 12.0) * dfn0;
}

GreenRw green_rw(int d, double mu, int n_max, int radius) {
  check_mu(d, mu);
  return green_rw(SrwKernelTable(d, radius, n_max), mu);
}

GreenRw green_rw(const SrwKernelTable& table, double mu) {
  const int d = table.dim();
  check_mu(d, mu);
  const int n_max = table.n_max();
  GreenRw res{LatticeFunction<double>(Box(d, table.radius()), table.radius())};
  res.mu = mu;
  res.n_max = n_max;
  res.critical = is_critical(d, mu);
  const Box& box = res.G.box();
  const double z = 2.0 * d * mu;
  Eigen::ArrayXd powers(n_max + 1);
  powers[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) powers[n] = powers[n - 1] * z;

  const auto& reps = table.representatives();
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const LatticePoint& x = reps[r];
    const auto row = table.row(r);
    double value;
    if (res.critical) {
      value = critical_value(row, n_max, d, x);
      const double half = critical_value(row, n_max / 2, d, x);
      res.error_estimate = std::max(res.error_estimate, std::abs(value - half));
      res.tail_added = std::max(res.tail_added, value - row.sum());
    } else {
      value = (row * powers).sum();
    }
    res.G.values()[box.index(x)] = value;
  }
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const LatticePoint p = box.point(i);
    if (!p.is_canonical()) res.G.values()[i] = res.G.values()[box.index(p.canonical())];
  }
  if (!res.critical) {
    const double az = std::abs(z);
    res.tail_bound = std::pow(az, n_max + 1) / (1.0 - az);
  } else {
    res.tail_bound = res.error_estimate;
  }
  return res;
}

ConvergedValue green_rw_critical_point(const LatticePoint& x, double tol, int n_start, int n_limit) {
  const int d = x.dim();
  check_mu(d, 1.0 / (2 * d));
  ConvergedValue out;
  double previous = 0.0;
  bool have_previous = false;
  for (int n = std::max(n_start, 2); n <= n_limit; n *= 2) {
    const Eigen::ArrayXd row = pn_point(x, n);
    const double value = critical_value(row, n, d, x);
    out.value = value;
    out.n_used = n;
    if (have_previous) {
      out.last_change = std::abs(value - previous);
      if (out.last_change < tol) return out;
    }
    previous = value;
    have_previous = true;
  }
  throw Error(ErrorCode::kNotConverged, "critical G^rw at " + x.str() + " did not settle to " + std::to_string(tol));
}

EdgeworthFit edgeworth_fit(const LatticeFunction<double>& G, double rmin, double rmax) {
  const int d = G.dim();
  if (d <= 2) throw Error(ErrorCode::kOutOfRange, "Edgeworth fit needs d > 2");
  // Each lattice point in the window counts once; for symmetric G an orbit
  // representative stands in for its whole orbit.
  std::vector<std::pair<LatticePoint, double>> pts;
  const bool sym = is_symmetric(G);
  const Box& box = G.box();
  auto consider = [&](const LatticePoint& p, double weight) {
    const double r = p.norm();
    if (r >= rmin && r <= rmax) pts.emplace_back(p, weight);
  };
  if (sym) {
    for (const LatticePoint& p : canonical_points(d, box.radius())) consider(p, static_cast<double>(orbit_size(p)));
  } else {
    for (std::int64_t i = 0; i < box.size(); ++i) consider(box.point(i), 1.0);
  }
  std::int64_t count = 0;
  for (const auto& [p, w] : pts) count += static_cast<std::int64_t>(w);
  if (count < 10) {
    throw Error(ErrorCode::kOutOfRange, "fit window holds " + std::to_string(count) + " points, need 10");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixX2d A(m, 2);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& [p, w] = pts[static_cast<std::size_t>(i)];
    const double r2 = static_cast<double>(p.norm2());
    const double sw = std::sqrt(w);
    A(i, 0) = sw;
    A(i, 1) = sw / r2;
    rhs[i] = sw * G(p) * std::pow(r2, 0.5 * (d - 2));
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(rhs);
  EdgeworthFit fit;
  fit.a = coef[0];
  fit.b = coef[1];
  fit.points = static_cast<int>(count);
  fit.relative_residual = (A * coef - rhs).norm() / rhs.norm();
  std::vector<double> scaled;
  scaled.reserve(pts.size());
  for (const auto& [p, w] : pts) {
    const double r2 = static_cast<double>(p.norm2());
    const double model = fit.a * std::pow(r2, 0.5 * (2 - d)) + fit.b * std::pow(r2, -0.5 * d);
    const double g = G(p);
    const double diff = std::abs(g - model);
    const double rel = diff / std::abs(g);
    if (rel > fit.max_relative_residual) {
      fit.max_relative_residual = rel;
      fit.worst = p;
    }
    scaled.push_back(diff * std::pow(r2, 0.5 * (d + 2)));
  }
  fit.scaled_residual_max = *std::max_element(scaled.begin(), scaled.end());
  std::nth_element(scaled.begin(), scaled.begin() + scaled.size() / 2, scaled.end());
  fit.scaled_residual_median = scaled[scaled.size() / 2];
  return fit;
}

GaussianBoundFit gaussian_bound(const SrwKernelTable& table, const std::vector<double>& cs) {
  GaussianBoundFit out;
  const int d = table.dim();
  std::vector<double> best(cs.size(), 0.0);
  const auto& reps = table.representatives();
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const double x2 = static_cast<double>(reps[r].norm2());
    const auto row = table.row(r);
    for (int n = 1; n <= table.n_max(); ++n) {
      if (row[n] <= 0.0) continue;
      ++out.samples;
      const double base = row[n] * std::pow(n, 0.5 * d);
      for (std::size_t j = 0; j < cs.size(); ++j) best[j] = std::max(best[j], base * std::exp(cs[j] * x2 / n));
    }
  }
  for (std::size_t j = 0; j < cs.size(); ++j) out.c_and_C.emplace_back(cs[j], best[j]);
  return out;
}

}  // namespace lacelab
