#include "lacelab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "lacelab/deconv.hpp"
#include "lacelab/series.hpp"
#include "lacelab/srw.hpp"

namespace lacelab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "p/q", "p", or a plain decimal such as "0.05" or "-1.25", read exactly.
Rational parse_exact(const std::string& text) {
  const std::string t = trim(text);
  const auto dot = t.find('.');
  if (dot == std::string::npos) return Rational::parse(t);
  const std::string digits = t.substr(0, dot) + t.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits.find_first_not_of("-0123456789") != std::string::npos) {
    throw Error(ErrorCode::kConfig, "malformed number '" + text + "'");
  }
  mpz_class den = 1;
  for (std::size_t i = dot + 1; i < t.size(); ++i) den *= 10;
  return Rational(mpq_class(mpz_class(digits == "-" ? "0" : digits), den));
}

template <typename T>
T parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if constexpr (std::is_unsigned_v<T>) {
      if (value.find('-') != std::string::npos) throw std::out_of_range(value);
      const unsigned long long v = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return static_cast<T>(v);
    } else {
      const long long v = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return static_cast<T>(v);
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::kConfig, "bad integer for " + key + ": '" + value + "'");
  }
}

double parse_real(const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    return parse_exact(value).to_double();
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs body, timing it and turning library errors into statuses.
CheckResult run_check(const std::string& name, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const Error& e) {
    r.status = e.code() == ErrorCode::kBudgetExceeded ? CheckStatus::kIncomplete : CheckStatus::kFail;
    r.witness = e.what();
  }
  r.seconds = seconds_since(t0);
  return r;
}

void fail(CheckResult& r, const std::string& witness) {
  if (r.status == CheckStatus::kPass) {
    r.status = CheckStatus::kFail;
    r.witness = witness;
  }
}

SeriesFunction<double> to_float(const SeriesFunction<Rational>& s) {
  SeriesFunction<double> out(s.dim(), s.radius(), s.n_max());
  for (std::int64_t i = 0; i < s.box().size(); ++i) {
    const LatticePoint x = s.box().point(i);
    for (int n = 0; n <= s.n_max(); ++n) {
      const double v = s.coeffs()(i, n).to_double();
      if (v != 0.0) out.set_coeff(x, n, v);
    }
  }
  return out;
}

template <typename Scalar>
std::vector<Scalar> cube_truncated(const std::vector<Scalar>& p) {
  const std::size_t n = p.size();
  std::vector<Scalar> sq(n, Scalar(0));
  std::vector<Scalar> cu(n, Scalar(0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; a + b < n; ++b) sq[a + b] += p[a] * p[b];
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; a + b < n; ++b) cu[a + b] += sq[a] * p[b];
  }
  return cu;
}

// Sparse random function on the box of radius r with 1..max_points values in (-1, 1).
LatticeFunction<double> random_sparse(int d, int r, int cap, int max_points, std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t base) {
  LatticeFunction<double> f(Box(d, r), cap);
  const int k = 1 + static_cast<int>(draw(seed, stream, base) % static_cast<std::uint64_t>(max_points));
  std::uint64_t c = base + 1;
  for (int j = 0; j < k; ++j) {
    LatticePoint p(d);
    for (int i = 0; i < d; ++i) p[i] = static_cast<int>(draw(seed, stream, c++) % static_cast<std::uint64_t>(2 * r + 1)) - r;
    f.set(p, 2.0 * draw_unit(seed, stream, c++) - 1.0);
  }
  return f;
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::kExact ? "exact" : "float"; }

Mode parse_mode(const std::string& text) {
  if (text == "exact") return Mode::kExact;
  if (text == "float") return Mode::kFloat;
  throw Error(ErrorCode::kConfig, "mode must be exact or float, got '" + text + "'");
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kIncomplete: return "incomplete";
  }
  return "fail";
}

Rational RunConfig::beta_exact() const { return parse_exact(beta); }
double RunConfig::beta_value() const { return beta_exact().to_double(); }

std::vector<double> RunConfig::lambda_grid() const {
  std::vector<double> out;
  const std::string t = trim(lambda);
  if (t.empty()) return out;
  const auto c1 = t.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = t.find(':', c1 + 1);
    if (c2 == std::string::npos) throw Error(ErrorCode::kConfig, "lambda grid must be lo:hi:count");
    const double lo = parse_real(trim(t.substr(0, c1)));
    const double hi = parse_real(trim(t.substr(c1 + 1, c2 - c1 - 1)));
    const int count = parse_int<int>("lambda", trim(t.substr(c2 + 1)));
    if (count < 1 || !(hi > lo)) throw Error(ErrorCode::kConfig, "empty lambda grid");
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / count);
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item)));
  return out;
}

nlohmann::json RunConfig::to_json() const {
  return {{"dim", dim},       {"beta", beta},     {"lambda", lambda},           {"nmax", n_max},
          {"Ncap", n_cap},    {"radius", radius}, {"mode", to_string(mode)},    {"budget", budget},
          {"seed", seed},     {"samples", samples}, {"out", out},               {"report", report},
          {"mutate", mutate}};
}

void set_config_value(RunConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "dim") {
    cfg.dim = parse_int<int>(key, value);
  } else if (key == "beta") {
    cfg.beta = value;
  } else if (key == "lambda") {
    cfg.lambda = value;
  } else if (key == "nmax") {
    cfg.n_max = parse_int<int>(key, value);
  } else if (key == "Ncap") {
    cfg.n_cap = parse_int<int>(key, value);
  } else if (key == "radius") {
    cfg.radius = parse_int<int>(key, value);
  } else if (key == "mode") {
    cfg.mode = parse_mode(value);
  } else if (key == "budget") {
    cfg.budget = parse_int<std::uint64_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "samples") {
    cfg.samples = parse_int<int>(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "report") {
    cfg.report = value;
  } else if (key == "mutate") {
    if (!value.empty() && value != "flip-J2") throw Error(ErrorCode::kConfig, "unknown mutation '" + value + "'");
    cfg.mutate = value;
  } else {
    throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& is) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kConfig, "cannot open config " + path.string());
  return parse_config(is);
}

void validate(const RunConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > kMaxDim) throw Error(ErrorCode::kConfig, "dim must be in [1, 8]");
  Rational b;
  try {
    b = cfg.beta_exact();
  } catch (const Error&) {
    throw Error(ErrorCode::kConfig, "malformed beta '" + cfg.beta + "'");
  }
  if (b < Rational(0) || b > Rational(1)) throw Error(ErrorCode::kConfig, "beta must be in [0, 1]");
  if (cfg.n_max < 0) throw Error(ErrorCode::kConfig, "nmax must be non-negative");
  if (cfg.n_cap < 1) throw Error(ErrorCode::kConfig, "Ncap must be positive");
  if (cfg.radius < 0) throw Error(ErrorCode::kConfig, "radius must be non-negative");
  if (cfg.budget == 0) throw Error(ErrorCode::kConfig, "budget must be positive");
  if (cfg.samples < 1) throw Error(ErrorCode::kConfig, "samples must be positive");
  for (double l : cfg.lambda_grid()) {
    if (!(l >= 0.0)) throw Error(ErrorCode::kConfig, "lambda must be non-negative");
  }
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL * (1 + (stream << 40) + counter));
}

double draw_unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(draw(seed, stream, counter) >> 11) * 0x1.0p-53;
}

Walk random_walk(int d, int max_length, std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  if (max_length < 1 || max_length > 63) throw Error(ErrorCode::kOutOfRange, "random walk length in [1, 63]");
  const std::uint64_t base = index * 64;
  const int len = 1 + static_cast<int>(draw(seed, stream, base + 63) % static_cast<std::uint64_t>(max_length));
  Walk w(d);
  for (int t = 0; t < len; ++t) {
    w.push_step(static_cast<int>(draw(seed, stream, base + static_cast<std::uint64_t>(t)) % static_cast<std::uint64_t>(2 * d)));
  }
  return w;
}

bool VerificationReport::all_passed() const {
  return complete && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

int VerificationReport::exit_code() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::kFail) return kExitFail;
  }
  return complete ? kExitPass : kExitBudget;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config.to_json();
  j["complete"] = complete;
  j["passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj = {{"name", c.name}, {"status", to_string(c.status)}, {"margins", c.margins},
                         {"seconds", c.seconds}};
    if (!c.witness.empty()) cj["witness"] = c.witness;
    j["checks"].push_back(cj);
  }
  return j;
}

CheckResult check_kj_identity(int d1_length, int d, int samples, int max_length, const Rational& beta,
                              std::uint64_t seed, Mode mode, const LaceOptions& opt) {
  return run_check("kj_identity", [&](CheckResult& r) {
    const double bf = beta.to_double();
    int walks = 0;
    int violations = 0;
    double worst = 0.0;
    auto test = [&](const Walk& w) {
      ++walks;
      bool holds;
      if (mode == Mode::kExact) {
        holds = check_KJ_identity(w, beta, opt).holds;
      } else {
        const int n = w.length();
        const double lhs = K_of<double>(w, 0, n, bf);
        double rhs = K_of<double>(w, 1, n, bf);
        for (int m = 2; m <= n; ++m) rhs += J_via_laces(w, 0, m, beta, opt).J.to_double() * K_of<double>(w, m, n, bf);
        const double err = std::abs(lhs - rhs);
        worst = std::max(worst, err);
        holds = err <= 1e-12 * std::max(1.0, std::abs(lhs));
      }
      if (!holds) {
        ++violations;
        fail(r, "walk " + w.str());
      }
    };
    for (int n = 1; n <= d1_length; ++n) {
      for (int m = 0; m < (1 << n); ++m) {
        std::vector<int> steps;
        for (int i = 0; i < n; ++i) steps.push_back((m >> i) & 1);
        test(Walk::from_steps(1, steps));
      }
    }
    for (int i = 0; i < samples; ++i) test(random_walk(d, max_length, seed, 1, static_cast<std::uint64_t>(i)));
    r.margins = {{"walks", walks}, {"violations", violations}, {"mode", to_string(mode)}};
    if (mode == Mode::kFloat) r.margins["max_abs_error"] = worst;
  });
}

CheckResult check_lace_equivalence(int d, int walks, int max_length, int max_interval, const Rational& beta,
                                   std::uint64_t seed) {
  return run_check("lace_equivalence", [&](CheckResult& r) {
    long intervals = 0;
    int violations = 0;
    for (int i = 0; i < walks; ++i) {
      const Walk w = random_walk(d, max_length, seed, 2, static_cast<std::uint64_t>(i));
      for (int a = 0; a <= w.length(); ++a) {
        for (int b = a + 1; b <= std::min(w.length(), a + max_interval); ++b) {
          ++intervals;
          const Rational brute = J_bruteforce(w, a, b, beta);
          const Rational laces = J_via_laces(w, a, b, beta).J;
          if (!(brute == laces)) {
            ++violations;
            fail(r, "walk " + w.str() + " interval [" + std::to_string(a) + "," + std::to_string(b) +
                        "]: " + brute.str() + " vs " + laces.str());
          }
        }
      }
    }
    r.margins = {{"walks", walks}, {"intervals", intervals}, {"violations", violations}};
  });
}

CheckResult check_lace_soundness(int max_length) {
  return run_check("lace_soundness", [&](CheckResult& r) {
    long graphs = 0;
    long pairs = 0;
    int violations = 0;
    for (int n = 1; n <= max_length; ++n) {
      std::vector<std::pair<EdgeMask, EdgeMask>> laces;  // (lace, lace + compatible)
      for (int N = 1; N <= n; ++N) {
        for (const Lace& L : enumerate_laces(N, 0, n)) {
          laces.emplace_back(L.graph.mask(), L.graph.mask() | compatible_edges(L).mask());
        }
      }
      const int bits = n * (n + 1) / 2;
      for (std::uint64_t m = 0; m < (std::uint64_t(1) << bits); ++m) {
        const IntervalGraph g = IntervalGraph::from_mask(0, n, EdgeMask(m));
        if (!is_connected(g)) continue;
        ++graphs;
        const Lace L = lace_of(g);
        if (!is_minimally_connected(L.graph) || !(lace_of(L.graph).graph == L.graph)) {
          ++violations;
          fail(r, "lace_of not idempotent on " + g.str());
        }
        for (const auto& [lm, closure] : laces) {
          ++pairs;
          const bool extracted = L.graph.mask() == lm;
          const bool between = (EdgeMask(m) & lm) == lm && (EdgeMask(m) & ~closure) == 0;
          if (extracted != between) {
            ++violations;
            fail(r, "projection property fails for " + g.str() + " against " + IntervalGraph::from_mask(0, n, lm).str());
          }
        }
      }
    }
    r.margins = {{"connected_graphs", graphs}, {"graph_lace_pairs", pairs}, {"violations", violations}};
  });
}

CheckResult check_fixed_point(int d, const std::vector<Rational>& betas, int n_max, int n_cap, Mode mode,
                              std::uint64_t budget) {
  return run_check("fixed_point", [&](CheckResult& r) {
    const CnTable ct = enumerate_cn(d, n_max, budget);
    const PiTable pt = enumerate_pi(d, n_max, budget);
    nlohmann::json per_beta = nlohmann::json::array();
    for (const Rational& beta : betas) {
      const SeriesFunction<Rational> G = ct.series(beta);
      const SeriesFunction<Rational> D = delta_saw_series(pt, beta, n_cap);
      long nonzero = 0;
      double worst = 0.0;
      if (mode == Mode::kExact) {
        SeriesFunction<Rational> res = series_convolve(G, D);
        res -= series_delta0<Rational>(d, n_max);
        for (std::int64_t i = 0; i < res.box().size(); ++i) {
          for (int n = 0; n <= n_max; ++n) {
            if (res.coeffs()(i, n).is_zero()) continue;
            ++nonzero;
            fail(r, "beta " + beta.str() + ": coefficient of lambda^" + std::to_string(n) + " at " +
                        res.box().point(i).str() + " is " + res.coeffs()(i, n).str());
          }
        }
      } else {
        const SeriesFunction<double> Gf = to_float(G);
        const SeriesFunction<double> Df = to_float(D);
        SeriesFunction<double> res = series_convolve(Gf, Df);
        res -= series_delta0<double>(d, n_max);
        const double scale = Gf.coeffs().abs().sum() * Df.coeffs().abs().sum();
        const double tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
        worst = res.coeffs().abs().maxCoeff();
        if (worst > tol) {
          ++nonzero;
          fail(r, "beta " + beta.str() + ": residual coefficient " + std::to_string(worst) + " above " +
                      std::to_string(tol));
        }
      }
      per_beta.push_back({{"beta", beta.str()}, {"nonzero_coefficients", nonzero}, {"max_abs", worst}});
    }
    r.margins = {{"dim", d}, {"nmax", n_max}, {"Ncap", n_cap}, {"mode", to_string(mode)}, {"per_beta", per_beta}};
  });
}

CheckResult check_pi_structure(int d, const std::vector<Rational>& betas, int n_max, Mode mode, std::uint64_t budget) {
  return run_check("pi_structure", [&](CheckResult& r) {
    const CnTable ct = enumerate_cn(d, n_max, budget);
    const PiTable pt = enumerate_pi(d, n_max, budget);
    const Box box(d, n_max);
    long points = 0;
    nlohmann::json per_beta = nlohmann::json::array();
    for (const Rational& beta : betas) {
      Rational min_slack(0);
      double min_slack_f = 0.0;
      double max_ratio = 0.0;  // |Pi^(2)| / (beta^2 G^3) where both are nonzero
      bool first = true;
      for (std::int64_t i = 0; i < box.size(); ++i) {
        const LatticePoint x = box.point(i);
        if (x.l1() > n_max) continue;
        ++points;
        std::vector<Rational> g(static_cast<std::size_t>(n_max + 1));
        for (int n = 0; n <= n_max; ++n) g[static_cast<std::size_t>(n)] = ct.cn<Rational>(n, x, beta);
        const Rational b2 = beta * beta;
        if (mode == Mode::kExact) {
          const auto g3 = cube_truncated(g);
          for (int n = 0; n <= n_max; ++n) {
            if (!x.is_origin() && !pt.coefficient(1, n, x, beta).is_zero()) {
              fail(r, "Pi^(1) nonzero at " + x.str() + ", lambda^" + std::to_string(n));
            }
            const Rational p2 = abs(pt.coefficient(2, n, x, beta));
            const Rational bound = b2 * g3[static_cast<std::size_t>(n)];
            const Rational slack = bound - p2;
            if (first || slack < min_slack) min_slack = slack;
            first = false;
            if (!p2.is_zero() && !bound.is_zero()) max_ratio = std::max(max_ratio, (p2 / bound).to_double());
            if (slack < Rational(0)) {
              fail(r, "Pi^(2) bound fails at " + x.str() + ", lambda^" + std::to_string(n) + ", beta " + beta.str());
            }
          }
        } else {
          std::vector<double> gf;
          for (const Rational& v : g) gf.push_back(v.to_double());
          const auto g3 = cube_truncated(gf);
          const double b2f = b2.to_double();
          for (int n = 0; n <= n_max; ++n) {
            const double p1 = pt.coefficient(1, n, x, beta).to_double();
            if (!x.is_origin() && p1 != 0.0) fail(r, "Pi^(1) nonzero at " + x.str());
            const double bound = b2f * g3[static_cast<std::size_t>(n)];
            const double p2 = std::abs(pt.coefficient(2, n, x, beta).to_double());
            const double slack = bound - p2;
            if (p2 != 0.0 && bound != 0.0) max_ratio = std::max(max_ratio, p2 / bound);
            if (first || slack < min_slack_f) min_slack_f = slack;
            first = false;
            if (slack < -1e-12 * std::max(1.0, bound)) fail(r, "Pi^(2) bound fails at " + x.str());
          }
        }
      }
      per_beta.push_back({{"beta", beta.str()},
                          {"min_slack", mode == Mode::kExact ? min_slack.to_double() : min_slack_f},
                          {"max_ratio", max_ratio}});
    }
    r.margins = {{"dim", d}, {"nmax", n_max}, {"point_checks", points}, {"per_beta", per_beta}};
  });
}

CheckResult check_norm_submultiplicativity(int d, int pairs, std::uint64_t seed) {
  return run_check("norm_submultiplicativity", [&](CheckResult& r) {
    const double c = std::ldexp(1.0, d + 1);
    double worst = 0.0;
    int violations = 0;
    for (int i = 0; i < pairs; ++i) {
      const std::uint64_t base = static_cast<std::uint64_t>(i) * 256;
      const LatticeFunction<double> f = random_sparse(d, 3, 6, 8, seed, 3, base);
      const LatticeFunction<double> g = random_sparse(d, 3, 6, 8, seed, 3, base + 128);
      const double lhs = banach_norm(convolve(f, g, ConvolvePath::kGeneral));
      const double ratio = lhs / (banach_norm(f) * banach_norm(g));
      worst = std::max(worst, ratio);
      if (ratio > c * (1.0 + 1e-12)) {
        ++violations;
        fail(r, "pair " + std::to_string(i) + " ratio " + std::to_string(ratio));
      }
    }
    r.margins = {{"pairs", pairs}, {"violations", violations}, {"max_ratio", worst}, {"constant", c}};
  });
}

CheckResult check_neumann(int d, int count, double scale, double residual_tol, std::uint64_t seed) {
  return run_check("neumann_inversion", [&](CheckResult& r) {
    const double limit = scale * std::ldexp(1.0, -d - 1);
    double worst_residual = 0.0;
    double worst_bound_use = 0.0;
    int max_terms = 0;
    for (int i = 0; i < count; ++i) {
      const std::uint64_t base = static_cast<std::uint64_t>(i) * 64;
      LatticeFunction<double> h = random_sparse(d, 1, 16, 4, seed, 4, base);
      const double target = limit * (0.05 + 0.95 * draw_unit(seed, 4, base + 63));
      h *= target / banach_norm(h);
      const LatticeFunction<double> f = delta0<double>(d, 16) + h;
      const NeumannResult<double> res = neumann_invert(f, residual_tol * 1e-2, 16);
      worst_residual = std::max(worst_residual, res.residual);
      worst_bound_use = std::max(worst_bound_use, res.inverse_distance / res.bound);
      max_terms = std::max(max_terms, res.terms);
      if (!(res.residual <= residual_tol) || !res.bound_holds) {
        fail(r, "sample " + std::to_string(i) + ": residual " + std::to_string(res.residual) + ", ||inv - delta0|| " +
                    std::to_string(res.inverse_distance) + " vs bound " + std::to_string(res.bound));
      }
    }
    r.margins = {{"samples", count},         {"max_residual", worst_residual}, {"residual_tol", residual_tol},
                 {"max_bound_fraction", worst_bound_use}, {"max_terms", max_terms}};
  });
}

CheckResult check_deconvolution(int d, int R, const std::vector<double>& betas, int n_max, double residual_tol) {
  return run_check("deconvolution", [&](CheckResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (double beta : betas) {
      LatticeFunction<double> delta = delta_rw<double>(d, 1.0 / (2 * d), 2);
      delta.axpy(beta, certified_perturbation(d));
      const Deconvolution dc = deconvolve(delta, beta, n_max, R, residual_tol);
      const DeconvReport& rep = dc.report;
      rows.push_back({{"beta", beta},
                      {"mu", rep.mu},
                      {"C2", rep.C2},
                      {"residual", rep.residual},
                      {"max_ratio", rep.max_ratio},
                      {"max_ratio_at", rep.max_ratio_at.str()},
                      {"E_norm", rep.E_norm},
                      {"E_bound", rep.E_bound},
                      {"correction_constant", rep.correction_constant}});
      if (!(rep.residual <= residual_tol)) fail(r, "beta " + std::to_string(beta) + ": residual " + std::to_string(rep.residual));
      if (!(rep.max_ratio <= 2.0)) {
        fail(r, "beta " + std::to_string(beta) + ": |G|/G^rw = " + std::to_string(rep.max_ratio) + " at " +
                    rep.max_ratio_at.str());
      }
      if (!rep.E_bound_holds) fail(r, "beta " + std::to_string(beta) + ": E norm above the inversion bound");
    }
    r.margins = {{"dim", d}, {"radius", R}, {"runs", rows}};
  });
}

CheckResult check_triple_sum(int d, int radius_uv, int R_small, int R_large, double stability_tol) {
  return run_check("triple_sum", [&](CheckResult& r) {
    const TripleSumScan s = triple_sum_scan(d, radius_uv, R_small, R_large);
    r.margins = {{"pairs", s.pairs},
                 {"sup_ratio", s.sup_ratio},
                 {"argmax_u", s.argmax_u.str()},
                 {"argmax_v", s.argmax_v.str()},
                 {"max_relative_change", s.max_relative_change},
                 {"tolerance", stability_tol}};
    if (!std::isfinite(s.sup_ratio)) fail(r, "ratio not finite");
    if (!(s.max_relative_change <= stability_tol)) {
      fail(r, "relative change " + std::to_string(s.max_relative_change) + " between radii");
    }
  });
}

CheckResult check_susceptibility(int d, double beta, int points, double lambda_max, int n_max, std::uint64_t budget) {
  return run_check("susceptibility", [&](CheckResult& r) {
    const CnTable ct = enumerate_cn(d, n_max, budget);
    const double h = 1e-6 * lambda_max;
    double min_margin = std::numeric_limits<double>::infinity();
    double worst_fd_error = 0.0;
    double at = 0.0;
    for (int i = 1; i <= points; ++i) {
      const double lambda = lambda_max * i / (points + 1);
      const double chi = susceptibility(ct, beta, lambda).value;
      const double fd =
          (susceptibility(ct, beta, lambda + h).value - susceptibility(ct, beta, lambda - h).value) / (2.0 * h);
      const double bound = 2.0 * d * chi * chi;
      const double margin = (bound - fd) / bound;
      worst_fd_error = std::max(worst_fd_error, std::abs(fd - susceptibility(ct, beta, lambda).derivative) / fd);
      if (margin < min_margin) {
        min_margin = margin;
        at = lambda;
      }
      if (fd > bound) fail(r, "lambda " + std::to_string(lambda) + ": " + std::to_string(fd) + " > " + std::to_string(bound));
    }
    r.margins = {{"dim", d},           {"beta", beta},           {"nmax", n_max},
                 {"points", points},   {"min_relative_margin", min_margin}, {"at_lambda", at},
                 {"max_fd_relative_error", worst_fd_error}};
  });
}

CheckResult check_cn_submultiplicativity(int d, int n_from, int n_max, const std::vector<Rational>& betas,
                                         std::uint64_t budget) {
  return run_check("cn_submultiplicativity", [&](CheckResult& r) {
    const CnTable ct = enumerate_cn(d, n_max, budget);
    nlohmann::json rows = nlohmann::json::array();
    for (const Rational& beta : betas) {
      const CnCheckReport rep = check_cn_submultiplicativity(ct, beta);
      int literal_failures = 0;
      bool summed = true;
      for (const CnCheckRow& row : rep.rows) {
        if (row.n < n_from) continue;
        if (!row.literal_holds) ++literal_failures;
        summed = summed && row.summed_holds;
        if (!row.pointwise_holds) {
          fail(r, "beta " + beta.str() + ", n " + std::to_string(row.n) + " at " + row.pointwise_witness.str());
        }
      }
      rows.push_back({{"beta", beta.str()},
                      {"pointwise_holds", rep.pointwise_all(n_from)},
                      {"summed_holds", summed},
                      {"literal_form_failures", literal_failures}});
    }
    r.margins = {{"dim", d}, {"n_range", {n_from, n_max}}, {"per_beta", rows}};
  });
}

CheckResult check_edgeworth(int d, double rmin, double rmax, int n_max, double max_residual) {
  return run_check("edgeworth", [&](CheckResult& r) {
    const GreenRw g = green_rw(d, 1.0 / (2 * d), n_max, static_cast<int>(std::ceil(rmax)));
    const EdgeworthFit fit = edgeworth_fit(g.G, rmin, rmax);
    r.margins = {{"a", fit.a},
                 {"b", fit.b},
                 {"points", fit.points},
                 {"relative_residual", fit.relative_residual},
                 {"max_pointwise_relative_residual", fit.max_relative_residual},
                 {"scaled_residual_median", fit.scaled_residual_median},
                 {"scaled_residual_max", fit.scaled_residual_max},
                 {"green_error_estimate", g.error_estimate}};
    if (!(fit.relative_residual < max_residual)) fail(r, "relative residual " + std::to_string(fit.relative_residual));
    if (!(fit.a > 0.0)) fail(r, "fitted a = " + std::to_string(fit.a));
  });
}

VerificationReport verify_all(const RunConfig& cfg) {
  validate(cfg);
  VerificationReport rep;
  rep.config = cfg;
  const Rational beta = cfg.beta_exact();
  const double bf = beta.to_double();
  LaceOptions opt;
  opt.n_cap = kMaxIntervalLength;
  opt.flip_J2_sign = cfg.mutate == "flip-J2";
  const int d = cfg.dim;

  rep.checks.push_back(check_kj_identity(6, d, cfg.samples, 10, beta, cfg.seed, cfg.mode, opt));
  rep.checks.push_back(check_lace_equivalence(d, cfg.samples, 8, 6, beta, cfg.seed));
  rep.checks.push_back(check_lace_soundness(5));
  rep.checks.push_back(check_fixed_point(d, {beta}, cfg.n_max, cfg.n_cap, cfg.mode, cfg.budget));
  rep.checks.push_back(check_pi_structure(d, {beta}, cfg.n_max, cfg.mode, cfg.budget));
  rep.checks.push_back(check_cn_submultiplicativity(d, 2, cfg.n_max, {beta}, cfg.budget));
  rep.checks.push_back(check_norm_submultiplicativity(d, cfg.samples, cfg.seed));
  rep.checks.push_back(check_neumann(d, std::max(10, cfg.samples / 10), 0.4, 1e-10, cfg.seed));
  const std::vector<double> grid = cfg.lambda_grid();
  const double lmax = grid.empty() ? 0.0 : *std::max_element(grid.begin(), grid.end());
  if (lmax > 0.0) {
    rep.checks.push_back(check_susceptibility(d, bf, static_cast<int>(grid.size()), lmax, cfg.n_max, cfg.budget));
  }
  const int dd = d >= 3 ? d : 5;
  rep.checks.push_back(check_deconvolution(dd, std::clamp(cfg.radius, 1, 8), {0.01}, 256, 1e-8));
  rep.checks.push_back(check_edgeworth(dd, 4.0, 8.0, 512, 0.02));

  std::sort(rep.checks.begin(), rep.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  rep.complete = std::none_of(rep.checks.begin(), rep.checks.end(),
                              [](const CheckResult& c) { return c.status == CheckStatus::kIncomplete; });
  return rep;
}

std::vector<BootstrapRow> bootstrap_scan(const RunConfig& cfg) {
  validate(cfg);
  const int d = cfg.dim;
  if (d < 3) throw Error(ErrorCode::kConfig, "bootstrap scan needs d >= 3 for the critical random walk");
  const CnTable ct = enumerate_cn(d, cfg.n_max, cfg.budget);
  const int R = std::min(cfg.radius, cfg.n_max);
  const GreenRw grw = green_rw(d, 1.0 / (2 * d), 512, R);
  const double beta = cfg.beta_value();
  std::vector<BootstrapRow> rows;
  for (double lambda : cfg.lambda_grid()) {
    const BootstrapPoint bp = bootstrap_ratio(ct, beta, lambda, grw.G);
    BootstrapRow row;
    row.lambda = lambda;
    row.f = bp.ratio;
    row.argmax = bp.argmax;
    row.forbidden = row.f > 2.0 && row.f <= 3.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lacelab
