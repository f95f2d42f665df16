#ifndef LACELAB_WSAW_HPP
#define LACELAB_WSAW_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lacelab/lattice.hpp"
#include "lacelab/series.hpp"

namespace lacelab {

// Nearest-neighbour path gamma(0) = 0, ..., gamma(n).
class Walk {
 public:
  explicit Walk(int dim);
  // Steps are encoded 0..2d-1: direction 2i is +e_i, 2i+1 is -e_i.
  static Walk from_steps(int dim, const std::vector<int>& steps);
  static Walk from_points(const std::vector<LatticePoint>& points);

  int dim() const { return dim_; }
  int length() const { return static_cast<int>(points_.size()) - 1; }
  const LatticePoint& operator[](int s) const { return points_[static_cast<std::size_t>(s)]; }
  const std::vector<LatticePoint>& points() const { return points_; }
  const LatticePoint& end() const { return points_.back(); }

  void push_step(int direction);
  // Number of pairs s < t with gamma(s) = gamma(t).
  std::int64_t intersection_total() const { return intersections_; }
  int visits(const LatticePoint& p) const;
  bool coincide(int s, int t) const { return points_[static_cast<std::size_t>(s)] == points_[static_cast<std::size_t>(t)]; }
  bool self_avoiding() const { return intersections_ == 0; }
  std::string str() const;

 private:
  int dim_;
  std::vector<LatticePoint> points_;
  std::map<LatticePoint, int> visits_;
  std::int64_t intersections_ = 0;
};

// W^beta(gamma) = (1 - beta)^{intersection_total}.
template <typename Scalar>
Scalar weight(const Walk& gamma, const Scalar& beta) {
  if (beta < Scalar(0) || beta > Scalar(1)) throw Error(ErrorCode::kOutOfRange, "beta outside [0, 1]");
  Scalar w(1);
  const Scalar u = Scalar(1) - beta;
  for (std::int64_t k = 0; k < gamma.intersection_total(); ++k) w *= u;
  return w;
}

// Exact enumeration of all walks of length <= n_max, stored as the number of
// n-step walks ending at x with exactly k coincident pairs. c_n(x) is then the
// polynomial sum_k count * (1 - beta)^k, so one table serves every beta.
class CnTable {
 public:
  int dim() const { return d_; }
  int n_max() const { return n_max_; }
  std::uint64_t paths_visited() const { return paths_; }
  int max_pairs() const { return k_max_; }

  std::uint64_t count(int n, const LatticePoint& x, int k) const;
  std::uint64_t total_count(int n) const;

  template <typename Scalar>
  Scalar cn(int n, const LatticePoint& x, const Scalar& beta) const;
  template <typename Scalar>
  LatticeFunction<Scalar> cn_function(int n, const Scalar& beta) const;
  // Sum over x of c_n(x).
  template <typename Scalar>
  Scalar cn_total(int n, const Scalar& beta) const;
  // sum_n lambda^n c_n(x) as an exact series.
  SeriesFunction<Rational> series(const Rational& beta) const;

 private:
  friend CnTable enumerate_cn(int d, int n_max, std::uint64_t budget);
  std::int64_t ball_index(const LatticePoint& x) const;
  std::size_t slot(int n, std::int64_t ball, int k) const {
    return (static_cast<std::size_t>(n) * static_cast<std::size_t>(ball_size_) + static_cast<std::size_t>(ball)) *
               static_cast<std::size_t>(k_max_ + 1) +
           static_cast<std::size_t>(k);
  }

  int d_ = 0;
  int n_max_ = 0;
  int k_max_ = 0;
  std::int64_t ball_size_ = 0;
  std::vector<std::int32_t> ball_of_box_;  // box(n_max) index -> l1-ball rank, -1 outside
  std::vector<LatticePoint> ball_points_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t paths_ = 0;
};

inline constexpr std::uint64_t kDefaultPathBudget = 2'000'000'000ULL;

// Depth-first enumeration with incremental coincidence counting: stepping onto a
// site adds its current visit count to the running total. Throws
// ErrorCode::kBudgetExceeded when sum_{n <= n_max} (2d)^n exceeds the budget.
CnTable enumerate_cn(int d, int n_max, std::uint64_t budget = kDefaultPathBudget);

// sum_{n <= n_max} lambda^n c_n(x).
template <typename Scalar>
LatticeFunction<Scalar> green_saw(const CnTable& table, const Scalar& beta, const Scalar& lambda);

struct Susceptibility {
  double value = 0.0;
  double derivative = 0.0;  // exact derivative of the truncated polynomial
  // Tail estimate lambda^{n_max+1} C_{n_max} r / (1 - lambda r) from the last
  // growth ratio r = C_{n_max} / C_{n_max-1}; infinite when lambda r >= 1.
  double tail_estimate = 0.0;
};
Susceptibility susceptibility(const CnTable& table, double beta, double lambda);
Rational susceptibility_exact(const CnTable& table, const Rational& beta, const Rational& lambda);

// Heuristic critical point from the last growth ratio of sum_x c_n(x).
double lambda_c_estimate(const CnTable& table, double beta);

struct CnCheckRow {
  int n = 0;
  // Literal form: n c_n(x) <= 2d sum_m (c_m * c_{n-1-m})(x).
  bool literal_holds = true;
  LatticePoint literal_witness{1};
  // Walk-splitting form: n c_n(x) <= sum_m (c_m * (2d p_1) * c_{n-1-m})(x).
  bool pointwise_holds = true;
  LatticePoint pointwise_witness{1};
  Rational pointwise_min_slack;  // min over x of RHS - LHS
  // Summed over x: n C_n <= 2d sum_m C_m C_{n-1-m}.
  bool summed_holds = true;
  Rational summed_slack;
};
struct CnCheckReport {
  Rational beta;
  std::vector<CnCheckRow> rows;  // n = 1..n_max
  bool pointwise_all(int n_from) const;
};
CnCheckReport check_cn_submultiplicativity(const CnTable& table, const Rational& beta);

struct BootstrapPoint {
  double lambda = 0.0;
  double ratio = 0.0;
  LatticePoint argmax{1};
};
// max over the box of G^saw_lambda(x) / G^rw(x), G^saw truncated at the table's n_max.
BootstrapPoint bootstrap_ratio(const CnTable& table, double beta, double lambda, const LatticeFunction<double>& grw);

}  // namespace lacelab

#endif  // LACELAB_WSAW_HPP
