#ifndef LACELAB_HARNESS_HPP
#define LACELAB_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "lacelab/lace.hpp"
#include "lacelab/rational.hpp"
#include "lacelab/wsaw.hpp"

namespace lacelab {

enum class Mode { kExact, kFloat };

std::string to_string(Mode m);
Mode parse_mode(const std::string& text);

// Flat key=value configuration. Keys: dim, beta, lambda, nmax, Ncap, radius,
// mode, budget, seed, samples, out, report, mutate. '#' starts a comment.
// beta and lambda are kept as text so exact mode reads them as rationals.
// lambda is a value, a comma list, or lo:hi:count (count points, hi excluded).
struct RunConfig {
  int dim = 2;
  std::string beta = "1/2";
  std::string lambda = "0:0.2:20";
  int n_max = 8;
  int n_cap = 8;
  int radius = 10;
  Mode mode = Mode::kExact;
  std::uint64_t budget = kDefaultPathBudget;
  std::uint64_t seed = 20240101;
  int samples = 200;
  std::string out;
  std::string report;
  std::string mutate;  // "" or "flip-J2"

  Rational beta_exact() const;
  double beta_value() const;
  std::vector<double> lambda_grid() const;
  nlohmann::json to_json() const;
};

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);
// Throws kConfig when an invariant of RunConfig fails.
void validate(const RunConfig& cfg);

// Counter-based generator: the SplitMix64 output for state
// seed + 0x9E3779B97F4A7C15 * (1 + (stream << 40) + counter).
std::uint64_t splitmix64_mix(std::uint64_t z);
std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);
double draw_unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);  // [0, 1)
// Walk number `index` of a stream: length uniform in [1, max_length], steps
// from counters index * 64 + t, length from counter index * 64 + 63.
Walk random_walk(int d, int max_length, std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

enum class CheckStatus { kPass, kFail, kIncomplete };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  std::string witness;  // set for failures
  nlohmann::json margins = nlohmann::json::object();
  double seconds = 0.0;
  bool passed() const { return status == CheckStatus::kPass; }
};

inline constexpr int kReportSchemaVersion = 1;

struct VerificationReport {
  RunConfig config;
  std::vector<CheckResult> checks;  // sorted by name
  bool complete = true;
  bool all_passed() const;
  int exit_code() const;  // 0 pass, 1 failure, 3 incomplete
  nlohmann::json to_json() const;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

// Individual checks. Each returns a result instead of throwing; a budget
// overrun turns into kIncomplete.

// K[0,n] = K[1,n] + sum_m J[0,m] K[m,n]: every d=1 walk of length <= d1_length,
// then `samples` random walks in dimension d of length <= max_length.
CheckResult check_kj_identity(int d1_length, int d, int samples, int max_length, const Rational& beta,
                              std::uint64_t seed, Mode mode, const LaceOptions& opt = {});
// J by connected graphs vs J by laces on every interval of length <= max_interval.
CheckResult check_lace_equivalence(int d, int walks, int max_length, int max_interval, const Rational& beta,
                                   std::uint64_t seed);
// lace_of idempotent, and lace_of(G) = L iff L <= G <= L + compatible(L), for every graph on [0,n], n <= max_length.
CheckResult check_lace_soundness(int max_length);
// Every lambda coefficient of G^saw * Delta^saw - delta0 vanishes up to n_max.
CheckResult check_fixed_point(int d, const std::vector<Rational>& betas, int n_max, int n_cap, Mode mode,
                              std::uint64_t budget);
// Pi^(1)(x) = 0 for x != 0 and [lambda^n] Pi^(2)(x) <= beta^2 [lambda^n] G^saw(x)^3.
CheckResult check_pi_structure(int d, const std::vector<Rational>& betas, int n_max, Mode mode, std::uint64_t budget);
// ||f*g|| <= 2^{d+1} ||f|| ||g|| on random sparse pairs.
CheckResult check_norm_submultiplicativity(int d, int pairs, std::uint64_t seed);
// Neumann inversion of random f with ||f - delta0|| <= scale 2^{-d-1}.
CheckResult check_neumann(int d, int count, double scale, double residual_tol, std::uint64_t seed);
// Deconvolution of Delta^rw_{1/(2d)} + beta P: |G| <= 2 G^rw and residual bound.
CheckResult check_deconvolution(int d, int R, const std::vector<double>& betas, int n_max, double residual_tol);
// Triple-sum ratio bounded and stable between two radii.
CheckResult check_triple_sum(int d, int radius_uv, int R_small, int R_large, double stability_tol);
// d chi / d lambda <= 2d chi^2 by central differences on `points` lambdas in (0, lambda_max).
CheckResult check_susceptibility(int d, double beta, int points, double lambda_max, int n_max, std::uint64_t budget);
// n c_n(x) <= sum_m (c_m * 2d p_1 * c_{n-1-m})(x) for n_from <= n <= n_max.
CheckResult check_cn_submultiplicativity(int d, int n_from, int n_max, const std::vector<Rational>& betas,
                                         std::uint64_t budget);
// Fit of the critical G^rw on rmin <= |x| <= rmax: relative residual below max_residual and a > 0.
CheckResult check_edgeworth(int d, double rmin, double rmax, int n_max, double max_residual);

// The default suite, scaled by the configuration.
VerificationReport verify_all(const RunConfig& cfg);

struct BootstrapRow {
  double lambda = 0.0;
  double f = 0.0;  // sup_x G^saw_lambda(x) / G^rw(x) over the box
  LatticePoint argmax{1};
  bool forbidden = false;  // f in (2, 3]
};
// Requires d >= 3 for the critical G^rw.
std::vector<BootstrapRow> bootstrap_scan(const RunConfig& cfg);

}  // namespace lacelab

#endif  // LACELAB_HARNESS_HPP
