#include <algorithm>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "lacelab/harness.hpp"

using namespace lacelab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config parsing") {
    std::istringstream is("# comment\ndim = 3\nbeta = 1/4   # trailing\nlambda = 0.1,0.2\nmode = float\nseed = 7\n");
    const RunConfig cfg = parse_config(is);
    CHECK(cfg.dim == 3);
    CHECK(cfg.beta_exact() == Rational(1, 4));
    CHECK(cfg.mode == Mode::kFloat);
    CHECK(cfg.seed == 7);
    CHECK(cfg.lambda_grid() == std::vector<double>{0.1, 0.2});
    CHECK(cfg.n_max == RunConfig{}.n_max);
    validate(cfg);
  }

  TEST_CASE("lambda grids") {
    RunConfig cfg;
    cfg.lambda = "0:1:4";
    CHECK(cfg.lambda_grid() == std::vector<double>{0.0, 0.25, 0.5, 0.75});
    cfg.lambda = "0.3";
    CHECK(cfg.lambda_grid() == std::vector<double>{0.3});
    cfg.lambda = "1:0:3";
    CHECK(code_of([&] { (void)cfg.lambda_grid(); }) == ErrorCode::kConfig);
  }

  TEST_CASE("config errors") {
    RunConfig cfg;
    CHECK(code_of([&] { set_config_value(cfg, "colour", "red"); }) == ErrorCode::kConfig);
    CHECK(code_of([&] { set_config_value(cfg, "dim", "two"); }) == ErrorCode::kConfig);
    CHECK(code_of([&] { set_config_value(cfg, "budget", "-5"); }) == ErrorCode::kConfig);
    CHECK(code_of([&] { set_config_value(cfg, "mode", "fast"); }) == ErrorCode::kConfig);
    CHECK(code_of([&] { set_config_value(cfg, "mutate", "flip-J3"); }) == ErrorCode::kConfig);
    std::istringstream no_eq("dim 3\n");
    CHECK(code_of([&] { parse_config(no_eq); }) == ErrorCode::kConfig);
    CHECK(code_of([&] { load_config("/nonexistent/lacelab.cfg"); }) == ErrorCode::kConfig);
    cfg.dim = 0;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::kConfig);
    cfg.dim = 2;
    cfg.beta = "3/2";
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::kConfig);
    cfg.beta = "1/2";
    cfg.samples = 0;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::kConfig);
  }

  TEST_CASE("config json mirrors the keys") {
    const auto j = RunConfig{}.to_json();
    for (const char* k : {"dim", "beta", "lambda", "nmax", "Ncap", "radius", "mode", "budget", "seed", "samples",
                          "out", "report", "mutate"}) {
      CHECK(j.contains(k));
    }
  }

  TEST_CASE("counter based generator") {
    CHECK(draw(0, 0, 0) == 0xE220A8397B1DCDAFULL);
    CHECK(draw(0, 0, 1) == 0x6E789E6AA1B965F4ULL);
    CHECK(draw(1, 2, 3) == draw(1, 2, 3));
    CHECK(draw(1, 2, 3) != draw(1, 3, 3));
    for (std::uint64_t i = 0; i < 100; ++i) {
      const double u = draw_unit(9, 1, i);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      const Walk w = random_walk(3, 12, 9, 1, i);
      CHECK(w.length() >= 1);
      CHECK(w.length() <= 12);
      CHECK(w.points() == random_walk(3, 12, 9, 1, i).points());
    }
  }

  TEST_CASE("mutation is detected with a witness") {
    LaceOptions flip;
    flip.flip_J2_sign = true;
    const auto good = check_kj_identity(4, 2, 100, 10, Rational(1, 2), 1, Mode::kExact);
    const auto bad = check_kj_identity(4, 2, 100, 10, Rational(1, 2), 1, Mode::kExact, flip);
    CHECK(good.passed());
    CHECK(bad.status == CheckStatus::kFail);
    CHECK_FALSE(bad.witness.empty());
  }

  TEST_CASE("exact and float modes agree") {
    const std::vector<Rational> betas{Rational(1, 4), Rational(1)};
    for (const Mode m : {Mode::kExact, Mode::kFloat}) {
      CHECK(check_kj_identity(5, 2, 50, 9, Rational(1, 3), 4, m).passed());
      CHECK(check_fixed_point(2, betas, 6, 8, m, kDefaultPathBudget).passed());
      CHECK(check_pi_structure(2, betas, 6, m, kDefaultPathBudget).passed());
    }
  }

  TEST_CASE("budget overrun is incomplete") {
    const auto r = check_fixed_point(3, {Rational(1, 2)}, 8, 8, Mode::kExact, 1000);
    CHECK(r.status == CheckStatus::kIncomplete);
  }

  TEST_CASE("report shape and exit codes") {
    VerificationReport rep;
    rep.checks.push_back({"a", CheckStatus::kPass, "", {{"x", 1}}, 0.1});
    CHECK(rep.exit_code() == kExitPass);
    auto j = rep.to_json();
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["checks"][0]["name"] == "a");
    CHECK(j["checks"][0]["status"] == "pass");
    CHECK(j["passed"] == true);
    rep.complete = false;
    CHECK(rep.exit_code() == kExitBudget);
    rep.checks.push_back({"b", CheckStatus::kFail, "w", {}, 0.0});
    CHECK(rep.exit_code() == kExitFail);
    CHECK(rep.to_json()["checks"][1]["witness"] == "w");
  }

  TEST_CASE("small checks pass") {
    CHECK(check_lace_soundness(4).passed());
    CHECK(check_lace_equivalence(2, 40, 8, 6, Rational(1, 2), 3).passed());
    CHECK(check_norm_submultiplicativity(3, 100, 5).passed());
    CHECK(check_neumann(3, 20, 0.5, 1e-10, 6).passed());
    CHECK(check_cn_submultiplicativity(2, 2, 6, {Rational(1, 2)}, kDefaultPathBudget).passed());
    CHECK(check_susceptibility(2, 0.5, 5, 0.2, 8, kDefaultPathBudget).passed());
  }

  TEST_CASE("verify_all on a small configuration") {
    RunConfig cfg;
    cfg.samples = 30;
    cfg.n_max = 6;
    cfg.radius = 4;
    const auto rep = verify_all(cfg);
    CHECK(rep.all_passed());
    CHECK(std::is_sorted(rep.checks.begin(), rep.checks.end(),
                         [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; }));
  }

  TEST_CASE("bootstrap scan") {
    RunConfig cfg;
    cfg.dim = 3;
    cfg.n_max = 6;
    cfg.radius = 3;
    cfg.beta = "0";
    cfg.lambda = "0:0.16:9";
    const auto rows = bootstrap_scan(cfg);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].f < 1.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].f <= 1.0);
      CHECK_FALSE(rows[i].forbidden);
      if (i > 0) CHECK(rows[i].f >= rows[i - 1].f);
    }
    cfg.beta = "1";
    cfg.lambda = "0.3";
    CHECK(bootstrap_scan(cfg)[0].f > 0.0);
    cfg.dim = 2;
    CHECK(code_of([&] { bootstrap_scan(cfg); }) == ErrorCode::kConfig);
  }
}
