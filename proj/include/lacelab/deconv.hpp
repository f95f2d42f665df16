#ifndef LACELAB_DECONV_HPP
#define LACELAB_DECONV_HPP

#include <cstdint>
#include <vector>

#include "lacelab/lattice.hpp"
#include "lacelab/srw.hpp"

namespace lacelab {

// mu = (1 - sum_x Delta(x)) / (2d). Throws kOutOfRange outside [-1/(4d), 1/(2d)].
double choose_mu(const LatticeFunction<double>& delta);

struct RhoCertificate {
  LatticeFunction<double> rho{1, 0};
  double C2 = 0.0;
  double exponent = 0.0;         // decay exponent of the gate, d + 4 by default
  bool symmetry_ok = false;
  bool zero_sum_ok = false;
  double decay_constant = 0.0;   // sup |rho(x)| |x|^exponent
  double first_moment_max = 0.0; // max_i |sum rho(y) y_i|
  double mixed_moment_max = 0.0; // max_{i != j} |sum rho(y) y_i y_j|
  bool valid() const { return symmetry_ok && zero_sum_ok && decay_constant <= 1.0 + 1e-12; }
};

// rho = (Delta - Delta^rw_mu) / (C2 beta), with C2 the smallest constant giving
// sup |rho(x)| |x|^exponent = 1. A non-positive exponent selects d + 4.
RhoCertificate build_rho(const LatticeFunction<double>& delta, double mu, double beta, double exponent = 0.0);

struct ShellProfile {
  std::vector<double> sup;  // index r: sup over floor(|x|) = r of the weighted value, 0 for empty shells
};

struct RhoGreenNorm {
  double norm = 0.0;           // banach_norm of rho*G on the trusted ball
  int trusted_radius = 0;      // G.radius() - rho.radius()
  ShellProfile profile;        // complete shells only, sup |(rho*G)(x)| |x|^{d+1}
};
// rho*G restricted to the box where the truncation of G does not enter.
RhoGreenNorm rho_green_norm(const LatticeFunction<double>& rho, const LatticeFunction<double>& G);

struct RhoGUniformRow {
  double mu = 0.0;
  double norm = 0.0;                 // ||rho * G^rw_mu||
  double factor_norm = 0.0;          // ||G^rw_mu * Delta^rw_{1/(2d)}||
  double factor_series_norm = 0.0;   // ||delta0 - (1 - 2d mu) sum_n (2d mu)^{n-1} p_n||
  double factor_defect = 0.0;        // sup |difference of the two functions|
};
struct RhoGUniformReport {
  std::vector<RhoGUniformRow> rows;
  double max_norm = 0.0;
  double max_factor_defect = 0.0;
};
RhoGUniformReport check_rhoG_uniform(const LatticeFunction<double>& rho, int d, const std::vector<double>& mu_grid,
                                     int n_max, int R);

struct DeconvReport {
  double mu = 0.0;
  double C2 = 0.0;
  double input_distance = 0.0;  // r = ||Delta * G^rw_mu - delta0||
  double residual = 0.0;        // ||Delta * G - delta0|| on the box
  double tolerance = 0.0;
  double E_norm = 0.0;
  double E_bound = 0.0;         // 2^{d+1} r / (1 - 2^{d+1} r)
  bool E_bound_holds = false;
  double max_ratio = 0.0;       // max |G(x)| / G^rw(x)
  LatticePoint max_ratio_at{1};
  double symmetry_defect = 0.0;
  double green_tail_error = 0.0;  // error estimate of G^rw_mu itself
  ShellProfile correction_profile;  // sup |(E*G^rw_mu)(x)| |x|^{d-2} / beta
  double correction_constant = 0.0; // max of the profile over x != 0
  bool ok() const { return residual <= tolerance && max_ratio <= 2.0 && E_bound_holds; }
};

struct Deconvolution {
  LatticeFunction<double> G;
  LatticeFunction<double> E;
  LatticeFunction<double> Grw;  // G^rw_mu on the same box
  DeconvReport report;
};

// Solves Delta * G = delta0 on the box of radius R for a symmetric Delta, with
// G = G^rw_mu outside the box, in orbit coordinates. E = Delta^rw_mu * (G - G^rw_mu),
// so that G = G^rw_mu + E * G^rw_mu. tol <= 0 selects 10 eps |box|.
Deconvolution deconvolve(const LatticeFunction<double>& delta, double beta, int n_max, int R, double tol = 0.0,
                         double exponent = 0.0);

struct GreenAsympReport {
  double constant = 0.0;        // sup |Gsaw - Grw| |x|^{d-2} / beta
  double max_difference = 0.0;  // sup |Gsaw - Grw|
  LatticePoint argmax{1};
};
GreenAsympReport green_asymp_check(const LatticeFunction<double>& Gsaw, const LatticeFunction<double>& Grw,
                                   double beta);

struct BubbleReport {
  double value = 0.0;
  std::vector<double> cumulative;  // index r: sum over |x|_inf <= r
  double last_shell_fraction = 0.0;
  // Log-log slope of the shell contributions over the outer half of the shells.
  double shell_exponent = 0.0;
  bool converging = false;         // shell_exponent < -1
};
BubbleReport bubble_diagram(const LatticeFunction<double>& G);

// Symmetric, zero-sum perturbation of radius 2 with sup |P(x)| |x|^{d+4} = 1.
LatticeFunction<double> certified_perturbation(int d);
// Random orbit weights on the box of the given radius, made zero-sum at the
// origin and scaled to sup |P(x)| |x|^{d+4} = 1.
LatticeFunction<double> random_certified_perturbation(int d, int radius, std::uint64_t seed);

// sum_i ((2-d)|x|^{-d} - (2-d) d x_i^2 |x|^{-d-2}).
double harmonicity_sum(const LatticePoint& x);

}  // namespace lacelab

#endif  // LACELAB_DECONV_HPP
