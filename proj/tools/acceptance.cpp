// Runs each acceptance criterion at its stated size and tolerance.
#include <iostream>
#include <string>
#include <vector>

#include "lacelab/harness.hpp"

using namespace lacelab;

namespace {

struct Criterion {
  std::string name;
  double time_limit;  // seconds
  CheckResult (*run)();
};

constexpr std::uint64_t kSeed = 20240101;

const std::vector<Criterion> kCriteria = {
    {"kj_identity", 120,
     [] { return check_kj_identity(6, 2, 1000, 10, Rational(1, 3), kSeed, Mode::kExact); }},
    {"lace_equivalence", 120, [] { return check_lace_equivalence(2, 500, 10, 6, Rational(1, 3), kSeed); }},
    {"lace_soundness", 60, [] { return check_lace_soundness(5); }},
    {"fixed_point", 600,
     [] { return check_fixed_point(2, {Rational(1, 4), Rational(1, 2), Rational(1)}, 8, 8, Mode::kExact, kDefaultPathBudget); }},
    {"pi_structure", 300,
     [] { return check_pi_structure(2, {Rational(1, 4), Rational(1, 2), Rational(1)}, 8, Mode::kExact, kDefaultPathBudget); }},
    {"norm_submultiplicativity", 60, [] { return check_norm_submultiplicativity(5, 1000, kSeed); }},
    {"neumann_inversion", 120, [] { return check_neumann(5, 100, 0.4, 1e-10, kSeed); }},
    {"deconvolution", 600, [] { return check_deconvolution(5, 10, {0.001, 0.01}, 400, 1e-8); }},
    {"triple_sum", 600, [] { return check_triple_sum(5, 6, 12, 16, 0.01); }},
    {"susceptibility", 300, [] { return check_susceptibility(2, 0.2, 20, 0.2, 12, kDefaultPathBudget); }},
    {"cn_submultiplicativity", 300,
     [] { return check_cn_submultiplicativity(2, 2, 8, {Rational(0), Rational(1, 2), Rational(1)}, kDefaultPathBudget); }},
    {"edgeworth", 300, [] { return check_edgeworth(5, 4.0, 8.0, 512, 0.02); }},
};

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!only.empty() && only != c.name) continue;
    CheckResult r = c.run();
    const bool in_time = r.seconds <= c.time_limit;
    const bool ok = r.passed() && in_time;
    failures += ok ? 0 : 1;
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << " (" << r.seconds << " s, limit " << c.time_limit << " s)";
    if (!r.witness.empty()) std::cout << "  witness: " << r.witness;
    if (!in_time) std::cout << "  over time limit";
    std::cout << "\n    " << r.margins.dump() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
