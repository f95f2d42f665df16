#include "lacelab/deconv.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace lacelab {
namespace {

int shell_of(const LatticePoint& x) { return static_cast<int>(std::floor(x.norm() + 1e-9)); }

void shell_max(ShellProfile& p, int shell, double v) {
  if (static_cast<int>(p.sup.size()) <= shell) p.sup.resize(static_cast<std::size_t>(shell + 1), 0.0);
  p.sup[static_cast<std::size_t>(shell)] = std::max(p.sup[static_cast<std::size_t>(shell)], v);
}

int support_radius(const LatticeFunction<double>& f) { return f.trimmed().radius(); }

void check_mu_range(int d, double mu) {
  if (mu < -1.0 / (4 * d) - 1e-12 || mu > 1.0 / (2 * d) + 1e-12) {
    throw Error(ErrorCode::kOutOfRange, "mu = " + std::to_string(mu) + " outside [-1/(4d), 1/(2d)]");
  }
}

}  // namespace

double choose_mu(const LatticeFunction<double>& delta) {
  const int d = delta.dim();
  const double sum = delta.sum();
  if (!std::isfinite(sum)) throw Error(ErrorCode::kPrecondition, "Delta has no finite sum");
  double mu = (1.0 - sum) / (2 * d);
  check_mu_range(d, mu);
  if (std::abs(mu - 1.0 / (2 * d)) <= 1e-12) mu = 1.0 / (2 * d);
  return mu;
}

RhoCertificate build_rho(const LatticeFunction<double>& delta, double mu, double beta, double exponent) {
  const int d = delta.dim();
  RhoCertificate cert;
  cert.exponent = exponent > 0.0 ? exponent : d + 4.0;
  LatticeFunction<double> diff = delta - delta_rw<double>(d, mu, delta.radius_cap());
  double sup = 0.0;
  diff.for_each_nonzero(
      [&](const LatticePoint& x, double v) { sup = std::max(sup, std::abs(v) * radial_power(x, cert.exponent)); });
  if (sup == 0.0) {
    cert.rho = LatticeFunction<double>(d, 0);
    cert.symmetry_ok = cert.zero_sum_ok = true;
    return cert;
  }
  if (!(beta > 0.0)) throw Error(ErrorCode::kPrecondition, "rho needs beta > 0");
  cert.C2 = sup / beta;
  cert.rho = (1.0 / (cert.C2 * beta)) * diff;
  const LatticeFunction<double>& rho = cert.rho;

  const double l1 = l1_norm(rho);
  cert.symmetry_ok = symmetry_defect(rho) <= 1e-12 * l1;
  cert.zero_sum_ok = std::abs(rho.sum()) <= 1e-12 * l1;
  std::vector<double> first(static_cast<std::size_t>(d), 0.0);
  std::vector<double> second(static_cast<std::size_t>(d * d), 0.0);
  rho.for_each_nonzero([&](const LatticePoint& y, double v) {
    cert.decay_constant = std::max(cert.decay_constant, std::abs(v) * radial_power(y, cert.exponent));
    for (int i = 0; i < d; ++i) {
      first[static_cast<std::size_t>(i)] += v * y[i];
      for (int j = 0; j < d; ++j) second[static_cast<std::size_t>(i * d + j)] += v * y[i] * y[j];
    }
  });
  for (int i = 0; i < d; ++i) {
    cert.first_moment_max = std::max(cert.first_moment_max, std::abs(first[static_cast<std::size_t>(i)]));
    for (int j = 0; j < d; ++j) {
      if (i != j) cert.mixed_moment_max = std::max(cert.mixed_moment_max, std::abs(second[static_cast<std::size_t>(i * d + j)]));
    }
  }
  return cert;
}

RhoGreenNorm rho_green_norm(const LatticeFunction<double>& rho, const LatticeFunction<double>& G) {
  const int d = G.dim();
  RhoGreenNorm out;
  const int rr = support_radius(rho);
  out.trusted_radius = G.radius() - rr;
  if (out.trusted_radius < 0) throw Error(ErrorCode::kOutOfRange, "G box smaller than the support of rho");
  const LatticeFunction<double> conv = convolve(rho.resized(rr), G).resized(out.trusted_radius);
  out.norm = banach_norm(conv);
  const Box& b = conv.box();
  for (std::int64_t i = 0; i < b.size(); ++i) {
    const LatticePoint x = b.point(i);
    if (!x.is_canonical() || shell_of(x) > out.trusted_radius) continue;
    shell_max(out.profile, shell_of(x), std::abs(conv.values()[i]) * radial_power(x, d + 1.0));
  }
  return out;
}

RhoGUniformReport check_rhoG_uniform(const LatticeFunction<double>& rho, int d, const std::vector<double>& mu_grid,
                                     int n_max, int R) {
  if (rho.dim() != d) throw Error(ErrorCode::kDimensionMismatch, "check_rhoG_uniform");
  for (double mu : mu_grid) check_mu_range(d, mu);
  const int rr = support_radius(rho);
  const SrwKernelTable table(d, R + std::max(rr, 1), n_max);
  const LatticeFunction<double> drw = delta_rw<double>(d, 1.0 / (2 * d));
  RhoGUniformReport rep;
  for (double mu : mu_grid) {
    if (std::abs(mu - 1.0 / (2 * d)) <= 1e-12) mu = 1.0 / (2 * d);
    RhoGUniformRow row;
    row.mu = mu;
    const GreenRw g = green_rw(table, mu);
    row.norm = rho_green_norm(rho, g.G.resized(R + rr)).norm;

    const LatticeFunction<double> lhs = convolve(drw, g.G.resized(R + 1)).resized(R);
    LatticeFunction<double> rhs(Box(d, R), R);
    const double z = 2.0 * d * mu;
    for (std::int64_t i = 0; i < rhs.box().size(); ++i) {
      const LatticePoint x = rhs.box().point(i);
      if (!x.is_canonical()) continue;
      const auto p = table.row(x);
      double s = 0.0;
      double zp = 1.0;
      for (int n = 1; n <= n_max; ++n) {
        s += zp * p[n];
        zp *= z;
      }
      rhs.values()[i] = (x.is_origin() ? 1.0 : 0.0) - (1.0 - z) * s;
    }
    for (std::int64_t i = 0; i < rhs.box().size(); ++i) {
      const LatticePoint x = rhs.box().point(i);
      if (!x.is_canonical()) rhs.values()[i] = rhs.values()[rhs.box().index(x.canonical())];
    }
    row.factor_norm = banach_norm(lhs);
    row.factor_series_norm = banach_norm(rhs);
    row.factor_defect = (lhs.values() - rhs.values()).abs().maxCoeff();
    rep.max_norm = std::max(rep.max_norm, row.norm);
    rep.max_factor_defect = std::max(rep.max_factor_defect, row.factor_defect);
    rep.rows.push_back(row);
  }
  return rep;
}

Deconvolution deconvolve(const LatticeFunction<double>& delta, double beta, int n_max, int R, double tol,
                         double exponent) {
  const int d = delta.dim();
  if (R < 1) throw Error(ErrorCode::kOutOfRange, "deconvolution box radius must be positive");
  const LatticeFunction<double> dl = delta.trimmed();
  const int rd = std::max(dl.radius(), 1);
  DeconvReport rep;
  rep.mu = choose_mu(dl);
  const RhoCertificate cert = build_rho(dl, rep.mu, beta, exponent);
  if (!cert.valid()) {
    throw Error(ErrorCode::kPrecondition, std::string("Delta fails the certificate gate (") +
                                              (cert.symmetry_ok ? "" : "asymmetric ") +
                                              (cert.zero_sum_ok ? "" : "nonzero-sum ") + ")");
  }
  rep.C2 = cert.C2;

  const SrwKernelTable table(d, R + rd, n_max);
  const GreenRw grw = green_rw(table, rep.mu);
  const LatticeFunction<double>& gext = grw.G;
  rep.green_tail_error = grw.critical ? grw.error_estimate : grw.tail_bound;

  const LatticeFunction<double> f = convolve(dl, gext).resized(R) - delta0<double>(d);
  rep.input_distance = banach_norm(f);
  const double algebra = std::ldexp(1.0, d + 1);
  if (!(rep.input_distance < 1.0 / algebra)) {
    throw Error(ErrorCode::kPrecondition, "||Delta * G^rw_mu - delta0|| = " + std::to_string(rep.input_distance) +
                                              " is not below 2^{-d-1}");
  }

  // Orbit coordinates on the box of radius R.
  const Box box(d, R);
  const std::vector<LatticePoint> reps = canonical_points(d, R);
  std::vector<std::int32_t> orbit(static_cast<std::size_t>(box.size()), -1);
  for (std::size_t k = 0; k < reps.size(); ++k) orbit[static_cast<std::size_t>(box.index(reps[k]))] = static_cast<std::int32_t>(k);
  std::vector<std::pair<LatticePoint, double>> stencil;
  dl.for_each_nonzero([&](const LatticePoint& y, double v) { stencil.emplace_back(y, v); });

  const Eigen::Index n = static_cast<Eigen::Index>(reps.size());
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const LatticePoint& x = reps[static_cast<std::size_t>(k)];
    if (x.is_origin()) rhs[k] = 1.0;
    for (const auto& [y, v] : stencil) {
      const LatticePoint z = x - y;
      if (z.linf() <= R) {
        trip.emplace_back(k, orbit[static_cast<std::size_t>(box.index(z.canonical()))], v);
      } else {
        rhs[k] -= v * gext(z);
      }
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::kNotConverged, "orbit system is singular");
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::kNotConverged, "orbit solve failed");

  LatticeFunction<double> full = gext;
  for (std::int64_t i = 0; i < full.box().size(); ++i) {
    const LatticePoint x = full.box().point(i);
    if (x.linf() <= R) full.values()[i] = sol[orbit[static_cast<std::size_t>(box.index(x.canonical()))]];
  }

  Deconvolution out{full.resized(R), LatticeFunction<double>(d, R + 1), gext.resized(R), rep};
  DeconvReport& r = out.report;
  const LatticeFunction<double> resid = convolve(dl, full).resized(R) - delta0<double>(d);
  r.residual = banach_norm(resid);
  r.tolerance = tol > 0.0 ? tol : 10.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(box.size());

  const LatticeFunction<double> diff = out.G - out.Grw;  // E * G^rw_mu
  out.E = convolve(delta_rw<double>(d, r.mu, R + 1), diff);
  r.E_norm = banach_norm(out.E);
  const double q = algebra * r.input_distance;
  r.E_bound = q / (1.0 - q);
  r.E_bound_holds = r.E_norm <= r.E_bound * (1.0 + 1e-12);
  r.symmetry_defect = symmetry_defect(out.G);

  for (std::int64_t i = 0; i < box.size(); ++i) {
    const LatticePoint x = box.point(i);
    if (!x.is_canonical()) continue;
    const double ratio = std::abs(out.G.values()[i]) / out.Grw.values()[i];
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.max_ratio_at = x;
    }
    if (beta > 0.0 && shell_of(x) <= R) {
      const double c = std::abs(diff.values()[i]) * radial_power(x, d - 2.0) / beta;
      shell_max(r.correction_profile, shell_of(x), c);
      r.correction_constant = std::max(r.correction_constant, c);
    }
  }
  return out;
}

GreenAsympReport green_asymp_check(const LatticeFunction<double>& Gsaw, const LatticeFunction<double>& Grw,
                                   double beta) {
  if (Gsaw.dim() != Grw.dim()) throw Error(ErrorCode::kDimensionMismatch, "green_asymp_check");
  const int d = Gsaw.dim();
  const Box b(d, std::min(Gsaw.radius(), Grw.radius()));
  GreenAsympReport rep;
  double weighted = 0.0;
  for (std::int64_t i = 0; i < b.size(); ++i) {
    const LatticePoint x = b.point(i);
    const double diff = std::abs(Gsaw(x) - Grw(x));
    rep.max_difference = std::max(rep.max_difference, diff);
    const double w = diff * radial_power(x, d - 2.0);
    if (w > weighted) {
      weighted = w;
      rep.argmax = x;
    }
  }
  if (beta > 0.0) {
    rep.constant = weighted / beta;
  } else {
    rep.constant = weighted == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return rep;
}

BubbleReport bubble_diagram(const LatticeFunction<double>& G) {
  BubbleReport rep;
  const int R = G.radius();
  std::vector<double> shell(static_cast<std::size_t>(R + 1), 0.0);
  for (std::int64_t i = 0; i < G.box().size(); ++i) {
    const double v = G.values()[i];
    if (v != 0.0) shell[static_cast<std::size_t>(G.box().point(i).linf())] += v * v;
  }
  double acc = 0.0;
  for (double s : shell) {
    acc += s;
    rep.cumulative.push_back(acc);
  }
  rep.value = acc;
  rep.last_shell_fraction = acc > 0.0 ? shell.back() / acc : 0.0;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int r = std::max(1, R / 2); r <= R; ++r) {
    if (shell[static_cast<std::size_t>(r)] <= 0.0) continue;
    const double lx = std::log(static_cast<double>(r));
    const double ly = std::log(shell[static_cast<std::size_t>(r)]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 2) rep.shell_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const bool finite_support = shell.back() == 0.0 || R == 0;
  rep.converging = finite_support || (m >= 2 && rep.shell_exponent < -1.0);
  return rep;
}

LatticeFunction<double> certified_perturbation(int d) {
  const double ex = d + 4.0;
  LatticeFunction<double> p(Box(d, 2), 2);
  if (d == 1) {
    // 2 at +-2, -2 at +-1, scaled.
    const double s = 1.0 / std::max(std::pow(2.0, ex), 1.0);
    for (int sg : {1, -1}) {
      p.set(LatticePoint{2 * sg}, s);
      p.set(LatticePoint{sg}, -s);
    }
    return p;
  }
  const double w = 1.0 / (d - 1);
  const double s = 1.0 / std::max(std::pow(2.0, ex), w * std::pow(2.0, ex / 2));
  for (std::int64_t i = 0; i < p.box().size(); ++i) {
    const LatticePoint x = p.box().point(i);
    const LatticePoint c = x.canonical();
    if (c.l1() == 2 && c.linf() == 2) p.values()[i] = s;
    if (c.l1() == 2 && c.linf() == 1) p.values()[i] = -w * s;
  }
  return p;
}

LatticeFunction<double> random_certified_perturbation(int d, int radius, std::uint64_t seed) {
  if (radius < 1) throw Error(ErrorCode::kOutOfRange, "perturbation radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const Box box(d, radius);
  LatticeFunction<double> p(box, radius);
  std::vector<double> w(static_cast<std::size_t>(box.size()), 0.0);
  for (const LatticePoint& c : canonical_points(d, radius)) {
    if (!c.is_origin()) w[static_cast<std::size_t>(box.index(c))] = unif(rng);
  }
  double sum = 0.0;
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const LatticePoint x = box.point(i);
    if (x.is_origin()) continue;
    p.values()[i] = w[static_cast<std::size_t>(box.index(x.canonical()))];
    sum += p.values()[i];
  }
  p.values()[box.index(LatticePoint(d))] = -sum;
  double sup = 0.0;
  p.for_each_nonzero([&](const LatticePoint& x, double v) { sup = std::max(sup, std::abs(v) * radial_power(x, d + 4.0)); });
  p *= 1.0 / sup;
  return p;
}

double harmonicity_sum(const LatticePoint& x) {
  const int d = x.dim();
  const double a = radial_power(x, -d);
  const double b = radial_power(x, -d - 2.0);
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += (2.0 - d) * a - (2.0 - d) * d * x[i] * x[i] * b;
  return s;
}

}  // namespace lacelab
