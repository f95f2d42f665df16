#ifndef LACELAB_SRW_HPP
#define LACELAB_SRW_HPP

#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lacelab/lattice.hpp"
#include "lacelab/series.hpp"

namespace lacelab {

// p_1: mass 1/(2d) on each unit vector.
template <typename Scalar>
LatticeFunction<Scalar> step_kernel(int d, int radius_cap = 1) {
  LatticeFunction<Scalar> f(Box(d, 1), std::max(radius_cap, 1));
  const Scalar w = scalar_from_ratio<Scalar>(1, 2 * d);
  for (int i = 0; i < d; ++i) {
    f.set(LatticePoint::unit(d, i, 1), w);
    f.set(LatticePoint::unit(d, i, -1), w);
  }
  return f;
}

// n-step transition probabilities as the n-fold convolution power of p_1, on the
// full box of radius n. The exact version is cached on disk when a cache
// directory is configured.
LatticeFunction<Rational> pn_exact(int d, int n);
LatticeFunction<double> pn_float(int d, int n);

// Exact series sum_n lambda^n c^0_n(x), where c^0_n(x) counts n-step walks 0 -> x.
SeriesFunction<Rational> green_rw_series(int d, int n_max);
// Exact series of Delta^rw_lambda: delta0 - lambda * (indicator of unit vectors).
SeriesFunction<Rational> delta_rw_series(int d, int n_max);

// p_n(x) in double precision for n <= n_max at every orbit representative of the
// box of the given radius. Each point is computed independently by splitting the
// steps among coordinates, so the box may be much smaller than n_max.
class SrwKernelTable {
 public:
  SrwKernelTable(int d, int radius, int n_max);

  int dim() const { return d_; }
  int radius() const { return radius_; }
  int n_max() const { return n_max_; }
  const std::vector<LatticePoint>& representatives() const { return reps_; }

  // p_n(x) for |x|_inf <= radius, 0 <= n <= n_max.
  double p(int n, const LatticePoint& x) const;
  // Row of p_0(x)..p_{n_max}(x) for a canonical x.
  Eigen::Ref<const Eigen::ArrayXd> row(const LatticePoint& canonical) const;
  Eigen::Ref<const Eigen::ArrayXd> row(std::size_t rep_index) const { return table_.row(rep_index).transpose(); }

 private:
  int d_;
  int radius_;
  int n_max_;
  std::vector<LatticePoint> reps_;
  std::unordered_map<std::int64_t, std::size_t> rep_of_;
  Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> table_;
};

// Single-point p_n(x) for all n <= n_max, same method as SrwKernelTable.
Eigen::ArrayXd pn_point(const LatticePoint& x, int n_max);

struct GreenRw {
  LatticeFunction<double> G;
  double mu = 0.0;
  int n_max = 0;
  bool critical = false;
  // Subcritical: |2d mu|^{n_max+1} / (1 - |2d mu|). Critical: power-law tail
  // added from the local limit theorem, with error_estimate from halving n_max.
  double tail_bound = 0.0;
  double tail_added = 0.0;      // largest tail correction added at any point
  double error_estimate = 0.0;  // sup over box of |G_N - G_{N/2}| (critical only)
};

// G^rw_mu(x) = sum_n (2 d mu)^n p_n(x) on the box of radius R. Requires
// -1/(2d) <= mu <= 1/(2d), and d > 2 when mu = 1/(2d).
GreenRw green_rw(int d, double mu, int n_max, int radius);
GreenRw green_rw(const SrwKernelTable& table, double mu);

// Sum of the local-limit approximation 2 (d/(2 pi n))^{d/2} exp(-d|x|^2/(2n))
// over n > n_max with n of the parity of |x|_1.
double critical_tail(int d, std::int64_t norm2, int l1_parity, int n_max);

struct ConvergedValue {
  double value = 0.0;
  int n_used = 0;
  double last_change = 0.0;
};
// Critical G^rw(x), doubling n_max until successive tail-corrected values differ by < tol.
ConvergedValue green_rw_critical_point(const LatticePoint& x, double tol, int n_start = 64, int n_limit = 1 << 14);

struct EdgeworthFit {
  double a = 0.0;
  double b = 0.0;
  int points = 0;                      // lattice points in the window
  double relative_residual = 0.0;      // ||fit - data|| / ||data|| over those points
  double max_relative_residual = 0.0;  // worst single point
  // |G(x) - a|x|^{2-d} - b|x|^{-d}| * |x|^{d+2} over the window.
  double scaled_residual_median = 0.0;
  double scaled_residual_max = 0.0;
  LatticePoint worst{1};
};

// Least squares G(x) ~ a|x|^{2-d} + b|x|^{-d} over rmin <= |x| <= rmax.
// The fit is done on G(x)|x|^{d-2} = a + b|x|^{-2}, i.e. in relative terms.
// The scalar b cannot absorb the direction dependence of the lattice |x|^{-d}
// term, so the worst single point sits well above the aggregate residual.
EdgeworthFit edgeworth_fit(const LatticeFunction<double>& G, double rmin, double rmax);

struct GaussianBoundFit {
  std::vector<std::pair<double, double>> c_and_C;  // smallest C for each trial c
  int samples = 0;
};
// For each c, the smallest C with p_n(x) <= C n^{-d/2} exp(-c|x|^2/n) over all
// nonzero tabulated (n >= 1, x).
GaussianBoundFit gaussian_bound(const SrwKernelTable& table, const std::vector<double>& cs);

}  // namespace lacelab

#endif  // LACELAB_SRW_HPP
