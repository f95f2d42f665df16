#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lacelab/deconv.hpp"
#include "lacelab/harness.hpp"
#include "lacelab/lace.hpp"
#include "lacelab/lattice_io.hpp"
#include "lacelab/srw.hpp"
#include "lacelab/wsaw.hpp"

using namespace lacelab;
using nlohmann::json;

namespace {

void emit_report(const RunConfig& cfg, const json& j) {
  if (cfg.report.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(cfg.report);
  if (!os) throw Error(ErrorCode::kIo, "cannot write report " + cfg.report);
  os << j.dump(2) << "\n";
}

json envelope(const RunConfig& cfg, const std::string& command) {
  return {{"schema_version", kReportSchemaVersion}, {"command", command}, {"config", cfg.to_json()}};
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

double first_lambda(const RunConfig& cfg) {
  const auto grid = cfg.lambda_grid();
  if (grid.empty()) throw Error(ErrorCode::kConfig, "lambda required");
  return grid.back();
}

int report_exit(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    std::cerr << (c.passed() ? "PASS " : (c.status == CheckStatus::kFail ? "FAIL " : "INCOMPLETE ")) << c.name;
    if (!c.witness.empty()) std::cerr << "  " << c.witness;
    std::cerr << "\n";
  }
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly self-avoiding walk and lace expansion toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> flags;
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  const std::pair<const char*, const char*> globals[] = {
      {"dim", "lattice dimension"},
      {"beta", "self-avoidance strength in [0, 1], e.g. 1/2"},
      {"lambda", "value, comma list or lo:hi:count"},
      {"nmax", "maximal walk length"},
      {"Ncap", "largest lace size kept"},
      {"radius", "box radius"},
      {"mode", "exact or float"},
      {"budget", "path budget for enumeration"},
      {"seed", "random seed"},
      {"out", "output file for lattice data"},
      {"report", "JSON report file, stdout if empty"},
      {"samples", "random samples per check"},
      {"mutate", "flip-J2 to negate the N = 2 lace term"},
  };
  for (const auto& [key, help] : globals) app.add_option(std::string("--") + key, flags[key], std::string(help));

  auto* srw = app.add_subcommand("srw-green", "random walk Green's function on a box");
  std::optional<double> srw_mu;
  int srw_terms = 512;
  srw->add_option("--mu", srw_mu, "defaults to 1/(2d)");
  srw->add_option("--terms", srw_terms, "number of walk lengths summed");

  auto* wsaw = app.add_subcommand("wsaw-green", "exact enumeration of G^saw at one lambda");
  auto* pi = app.add_subcommand("pi-coefficients", "lace coefficients Pi^(N) as series in lambda");
  auto* ident = app.add_subcommand("verify-identities", "lace identities and the fixed point equation");

  auto* dec = app.add_subcommand("deconvolve", "solve Delta * G = delta0 with the 2 G^rw check");
  std::string dec_input;
  dec->add_option("--input", dec_input, "Delta as a lattice CSV; default Delta^rw_{1/(2d)} + beta P");

  auto* boot = app.add_subcommand("bootstrap-scan", "sup_x G^saw / G^rw over the lambda grid");
  auto* bub = app.add_subcommand("bubble", "sum_x G(x)^2 with shell convergence");
  std::string bub_input;
  bub->add_option("--input", bub_input, "G as a lattice CSV; default critical G^rw");

  auto* all = app.add_subcommand("verify-all", "every property check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& [key, value] : flags) {
      if (app.count(std::string("--") + key) > 0) set_config_value(cfg, key, value);
    }
    validate(cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const int d = cfg.dim;
    if (srw->parsed()) {
      const double mu = srw_mu.value_or(1.0 / (2 * d));
      const GreenRw g = green_rw(d, mu, srw_terms, cfg.radius);
      if (!cfg.out.empty()) save_function(cfg.out, g.G);
      json j = envelope(cfg, "srw-green");
      j["mu"] = mu;
      j["terms"] = srw_terms;
      j["critical"] = g.critical;
      j["G0"] = g.G(LatticePoint(d));
      j["tail_bound"] = g.tail_bound;
      j["error_estimate"] = g.error_estimate;
      emit_report(cfg, j);
      return kExitPass;
    }
    if (wsaw->parsed()) {
      const CnTable ct = enumerate_cn(d, cfg.n_max, cfg.budget);
      json j = envelope(cfg, "wsaw-green");
      const double lambda = first_lambda(cfg);
      if (cfg.mode == Mode::kExact) {
        const Rational lr = Rational::from_double(lambda);
        const auto G = green_saw<Rational>(ct, cfg.beta_exact(), lr);
        if (!cfg.out.empty()) save_function(cfg.out, G);
        j["chi"] = susceptibility_exact(ct, cfg.beta_exact(), lr).str();
      } else {
        const auto G = green_saw<double>(ct, cfg.beta_value(), lambda);
        if (!cfg.out.empty()) save_function(cfg.out, G);
      }
      const Susceptibility s = susceptibility(ct, cfg.beta_value(), lambda);
      j["lambda"] = lambda;
      j["paths"] = ct.paths_visited();
      j["chi_float"] = s.value;
      j["chi_derivative"] = s.derivative;
      j["tail_estimate"] = s.tail_estimate;
      j["lambda_c_estimate"] = lambda_c_estimate(ct, cfg.beta_value());
      emit_report(cfg, j);
      return kExitPass;
    }
    if (pi->parsed()) {
      const PiTable pt = enumerate_pi(d, cfg.n_max, cfg.budget);
      json j = envelope(cfg, "pi-coefficients");
      j["paths"] = pt.paths_visited();
      json per = json::array();
      const int top = std::min(cfg.n_cap, pt.max_lace_size());
      for (int N = 1; N <= top; ++N) {
        const Rational b = cfg.beta_exact();
        if (cfg.mode == Mode::kExact) {
          const auto s = pt.series(N, b);
          if (!cfg.out.empty()) save_series(with_suffix(cfg.out, ".N" + std::to_string(N)), s);
        } else {
          const double lambda = first_lambda(cfg);
          const auto f = pt.function(N, cfg.beta_value(), lambda);
          if (!cfg.out.empty()) save_function(with_suffix(cfg.out, ".N" + std::to_string(N)), f);
        }
        per.push_back({{"N", N}, {"norm_at_lambda", banach_norm(pt.function(N, cfg.beta_value(), first_lambda(cfg)))}});
      }
      j["pi"] = per;
      emit_report(cfg, j);
      return kExitPass;
    }
    if (ident->parsed()) {
      VerificationReport rep;
      rep.config = cfg;
      LaceOptions opt;
      opt.flip_J2_sign = cfg.mutate == "flip-J2";
      const Rational b = cfg.beta_exact();
      rep.checks.push_back(check_kj_identity(6, d, cfg.samples, 10, b, cfg.seed, cfg.mode, opt));
      rep.checks.push_back(check_lace_equivalence(d, cfg.samples, 8, 6, b, cfg.seed));
      rep.checks.push_back(check_lace_soundness(5));
      rep.checks.push_back(check_fixed_point(d, {b}, cfg.n_max, cfg.n_cap, cfg.mode, cfg.budget));
      rep.checks.push_back(check_pi_structure(d, {b}, cfg.n_max, cfg.mode, cfg.budget));
      for (const auto& c : rep.checks) rep.complete = rep.complete && c.status != CheckStatus::kIncomplete;
      emit_report(cfg, rep.to_json());
      return report_exit(rep);
    }
    if (dec->parsed()) {
      const double beta = cfg.beta_value();
      LatticeFunction<double> delta = delta_rw<double>(d, 1.0 / (2 * d), 2);
      if (dec_input.empty()) {
        delta.axpy(beta, certified_perturbation(d));
      } else {
        delta = load_function<double>(dec_input);
      }
      const Deconvolution r = deconvolve(delta, beta, cfg.n_max, cfg.radius);
      if (!cfg.out.empty()) save_function(cfg.out, r.G);
      const DeconvReport& p = r.report;
      json j = envelope(cfg, "deconvolve");
      j["mu"] = p.mu;
      j["C2"] = p.C2;
      j["input_distance"] = p.input_distance;
      j["residual"] = p.residual;
      j["tolerance"] = p.tolerance;
      j["E_norm"] = p.E_norm;
      j["E_bound"] = p.E_bound;
      j["max_ratio"] = p.max_ratio;
      j["max_ratio_at"] = p.max_ratio_at.str();
      j["symmetry_defect"] = p.symmetry_defect;
      j["green_tail_error"] = p.green_tail_error;
      j["correction_profile"] = p.correction_profile.sup;
      j["correction_constant"] = p.correction_constant;
      j["ok"] = p.ok();
      emit_report(cfg, j);
      return p.ok() ? kExitPass : kExitFail;
    }
    if (boot->parsed()) {
      const auto rows = bootstrap_scan(cfg);
      std::ofstream file;
      if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) throw Error(ErrorCode::kIo, "cannot write " + cfg.out);
      }
      std::ostream& os = cfg.out.empty() ? std::cout : file;
      os << "lambda,f,argmax,forbidden\n";
      json j = envelope(cfg, "bootstrap-scan");
      int flagged = 0;
      for (const auto& r : rows) {
        os << format_scalar(r.lambda) << ',' << format_scalar(r.f) << ",\"" << r.argmax.str() << "\","
           << (r.forbidden ? 1 : 0) << "\n";
        flagged += r.forbidden ? 1 : 0;
      }
      j["rows"] = rows.size();
      j["forbidden_rows"] = flagged;
      if (!cfg.report.empty()) emit_report(cfg, j);
      return kExitPass;
    }
    if (bub->parsed()) {
      LatticeFunction<double> G = bub_input.empty() ? green_rw(d, 1.0 / (2 * d), 512, cfg.radius).G
                                                    : load_function<double>(bub_input);
      const BubbleReport b = bubble_diagram(G);
      json j = envelope(cfg, "bubble");
      j["value"] = b.value;
      j["cumulative"] = b.cumulative;
      j["last_shell_fraction"] = b.last_shell_fraction;
      j["shell_exponent"] = b.shell_exponent;
      j["converging"] = b.converging;
      emit_report(cfg, j);
      return kExitPass;
    }
    if (all->parsed()) {
      const VerificationReport rep = verify_all(cfg);
      emit_report(cfg, rep.to_json());
      return report_exit(rep);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == ErrorCode::kConfig) return kExitConfig;
    if (e.code() == ErrorCode::kBudgetExceeded) return kExitBudget;
    return kExitFail;
  }
  return kExitFail;
}
