#include <cmath>
#include <cstdint>
#include <vector>

#include "lacelab/lace.hpp"

namespace lacelab {
namespace {

// |w|^{alpha} by squared norm, with |0|^alpha = 1.
std::vector<double> power_table(std::int64_t max_norm2, double alpha) {
  std::vector<double> t(static_cast<std::size_t>(max_norm2 + 1));
  for (std::int64_t n = 0; n <= max_norm2; ++n) t[static_cast<std::size_t>(n)] = radial_power(n, alpha);
  return t;
}

// Lattice points of the Euclidean ball |w| <= R, flattened.
struct Ball {
  int d;
  std::vector<std::int8_t> coords;
  std::vector<std::int32_t> norm2;
  std::size_t size() const { return norm2.size(); }
};

Ball make_ball(int d, int R) {
  if (R > 127) throw Error(ErrorCode::kTooLarge, "ball radius beyond 127");
  Ball b{d, {}, {}};
  const Box box(d, R);
  const std::int64_t r2 = static_cast<std::int64_t>(R) * R;
  for (std::int64_t i = 0; i < box.size(); ++i) {
    const LatticePoint p = box.point(i);
    const std::int64_t n2 = p.norm2();
    if (n2 > r2) continue;
    for (int k = 0; k < d; ++k) b.coords.push_back(static_cast<std::int8_t>(p[k]));
    b.norm2.push_back(static_cast<std::int32_t>(n2));
  }
  return b;
}

struct TripleSums {
  double inner = 0.0;  // |w| <= R_small
  double outer = 0.0;  // |w| <= R_large
};

TripleSums triple_sums(const Ball& ball, const LatticePoint& u, const LatticePoint& v, int R_small,
                       const std::vector<double>& p42, const std::vector<double>& p2) {
  const int d = ball.d;
  const std::int64_t uu = u.norm2();
  const std::int64_t vv = v.norm2();
  const std::int64_t small2 = static_cast<std::int64_t>(R_small) * R_small;
  TripleSums s;
  const std::int8_t* w = ball.coords.data();
  for (std::size_t i = 0; i < ball.size(); ++i, w += d) {
    std::int64_t wu = 0;
    std::int64_t wv = 0;
    for (int k = 0; k < d; ++k) {
      wu += w[k] * u[k];
      wv += w[k] * v[k];
    }
    const std::int64_t n0 = ball.norm2[i];
    const double term = p42[static_cast<std::size_t>(n0)] * p2[static_cast<std::size_t>(n0 - 2 * wu + uu)] *
                        p2[static_cast<std::size_t>(n0 - 2 * wv + vv)];
    s.outer += term;
    if (n0 <= small2) s.inner += term;
  }
  const double norm = radial_power(u, 2.0 - d) * radial_power(v, 2.0 - d);
  s.inner /= norm;
  s.outer /= norm;
  return s;
}

void check_high_dim(int d) {
  if (d <= 4) throw Error(ErrorCode::kOutOfRange, "diagram bounds need d > 4 (no contraction for d <= 4)");
}

}  // namespace

double triple_sum_check(const LatticePoint& u, const LatticePoint& v, int R) {
  const int d = u.dim();
  check_high_dim(d);
  if (v.dim() != d) throw Error(ErrorCode::kDimensionMismatch, "triple_sum_check");
  const Ball ball = make_ball(d, R);
  const std::int64_t reach = static_cast<std::int64_t>(R + std::max(u.norm(), v.norm()) + 1);
  const auto p42 = power_table(reach * reach, 4.0 - 2 * d);
  const auto p2 = power_table(reach * reach, 2.0 - d);
  return triple_sums(ball, u, v, R, p42, p2).outer;
}

TripleSumScan triple_sum_scan(int d, int radius_uv, int R_small, int R_large) {
  check_high_dim(d);
  // Points k * direction with |k * direction| <= radius_uv for a fixed set of
  // directions; u runs over non-negative directions, v also over mixed signs.
  auto dir = [d](std::initializer_list<int> head) {
    LatticePoint p(d);
    int i = 0;
    for (int c : head) {
      if (i < d) p[i++] = c;
    }
    return p;
  };
  const std::vector<LatticePoint> u_dirs = {dir({1}), dir({1, 1}), dir({1, 1, 1}), dir({1, 1, 1, 1}),
                                            dir({1, 1, 1, 1, 1}), dir({2, 1})};
  std::vector<LatticePoint> v_dirs = u_dirs;
  for (const LatticePoint& p : {dir({-1}), dir({0, 1}), dir({-1, -1}), dir({0, 1, 1}), dir({-1, 1}),
                                dir({1, -1, 1, -1, 1}), dir({0, 0, 0, 0, 1}), dir({-2, 0, 1})}) {
    v_dirs.push_back(p);
  }
  auto multiples = [radius_uv](const std::vector<LatticePoint>& dirs, bool with_origin) {
    std::vector<LatticePoint> out;
    if (with_origin) out.push_back(LatticePoint(dirs.front().dim()));
    for (const LatticePoint& p : dirs) {
      LatticePoint q = p;
      for (int k = 1; q.norm() <= radius_uv + 1e-12; ++k) {
        out.push_back(q);
        q = q + p;
      }
    }
    return out;
  };
  const std::vector<LatticePoint> us = multiples(u_dirs, true);
  const std::vector<LatticePoint> vs = multiples(v_dirs, true);

  const Ball ball = make_ball(d, R_large);
  const std::int64_t reach = R_large + radius_uv + 1;
  const auto p42 = power_table(reach * reach, 4.0 - 2 * d);
  const auto p2 = power_table(reach * reach, 2.0 - d);
  TripleSumScan scan;
  for (const LatticePoint& u : us) {
    for (const LatticePoint& v : vs) {
      const TripleSums s = triple_sums(ball, u, v, R_small, p42, p2);
      ++scan.pairs;
      if (s.outer > scan.sup_ratio) {
        scan.sup_ratio = s.outer;
        scan.argmax_u = u;
        scan.argmax_v = v;
      }
      scan.max_relative_change = std::max(scan.max_relative_change, (s.outer - s.inner) / s.outer);
    }
  }
  return scan;
}

std::vector<ANBound> A_N_bound(int d, int n_max_N, int R, double step_constant) {
  check_high_dim(d);
  if (n_max_N < 2) throw Error(ErrorCode::kOutOfRange, "A^(N) starts at N = 2");
  std::vector<ANBound> out;
  const LatticeFunction<double> a2 =
      LatticeFunction<double>::generate(d, R, R, [d](const LatticePoint& x) { return radial_power(x, 6.0 - 3 * d); });
  out.push_back({2, a2, 1.0, true});
  if (n_max_N >= 3) {
    // A^(3)(x) = |x|^{2-d} sum_y |y|^{4-2d} |x-y|^{4-2d}, y restricted to the box.
    const LatticeFunction<double> p =
        LatticeFunction<double>::generate(d, R, R, [d](const LatticePoint& x) { return radial_power(x, 4.0 - 2 * d); });
    LatticeFunction<double> a3 = convolve(p, p);
    double sup = 0.0;
    for (std::int64_t i = 0; i < a3.box().size(); ++i) {
      const LatticePoint x = a3.box().point(i);
      a3.values()[i] *= radial_power(x, 2.0 - d);
      sup = std::max(sup, a3.values()[i] / a2.values()[i]);
    }
    out.push_back({3, a3, sup, true});
  }
  // Beyond N = 3 the chain sums over pairs of intermediate points; we apply the
  // induction step A^(N+1) <= C A^(N) with the measured triple-sum constant.
  for (int N = 4; N <= n_max_N; ++N) {
    const ANBound& prev = out.back();
    LatticeFunction<double> next = step_constant * prev.A;
    out.push_back({N, next, prev.sup_ratio_to_A2 * step_constant, false});
  }
  return out;
}

}  // namespace lacelab
