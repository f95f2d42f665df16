#ifndef LACELAB_SERIES_HPP
#define LACELAB_SERIES_HPP

#include <vector>

#include <Eigen/Core>

#include "lacelab/lattice.hpp"

namespace lacelab {

// Lattice function whose values are polynomials in lambda truncated at degree n_max.
// Row i of coeffs() holds the coefficients at box point i. The coefficient of
// lambda^n must vanish for |x|_1 > n, so the box radius never exceeds n_max.
template <typename Scalar>
class SeriesFunction {
 public:
  using Coeffs = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  SeriesFunction(int dim, int radius, int n_max)
      : box_(dim, std::min(radius, std::max(n_max, 0))), n_max_(n_max) {
    if (n_max < 0) throw Error(ErrorCode::kOutOfRange, "negative n_max");
    coeffs_ = Coeffs::Zero(box_.size(), n_max + 1);
  }

  int dim() const { return box_.dim(); }
  int radius() const { return box_.radius(); }
  int n_max() const { return n_max_; }
  const Box& box() const { return box_; }
  const Coeffs& coeffs() const { return coeffs_; }

  Scalar coeff(const LatticePoint& p, int n) const {
    if (n < 0 || n > n_max_ || !box_.contains(p)) return Scalar(0);
    return coeffs_(box_.index(p), n);
  }
  void set_coeff(const LatticePoint& p, int n, const Scalar& v) {
    check(p, n, v);
    if (!is_zero(v) || box_.contains(p)) coeffs_(box_.index(p), n) = v;
  }
  void add_coeff(const LatticePoint& p, int n, const Scalar& v) {
    if (is_zero(v)) return;
    check(p, n, v);
    coeffs_(box_.index(p), n) += v;
  }

  LatticeFunction<Scalar> coefficient(int n) const {
    LatticeFunction<Scalar> f(box_, box_.radius());
    f.values() = coeffs_.col(n);
    return f;
  }

  // Sum over n of lambda^n times the n-th coefficient (Horner).
  LatticeFunction<Scalar> evaluate(const Scalar& lambda) const {
    LatticeFunction<Scalar> f(box_, box_.radius());
    for (int n = n_max_; n >= 0; --n) f.values() = f.values() * lambda + coeffs_.col(n);
    return f;
  }

  static SeriesFunction from_coefficients(const std::vector<LatticeFunction<Scalar>>& parts) {
    if (parts.empty()) throw Error(ErrorCode::kParameterMismatch, "empty coefficient list");
    const int n_max = static_cast<int>(parts.size()) - 1;
    SeriesFunction s(parts[0].dim(), n_max, n_max);
    for (int n = 0; n <= n_max; ++n) {
      parts[n].for_each_nonzero([&](const LatticePoint& p, const Scalar& v) { s.set_coeff(p, n, v); });
    }
    return s;
  }

  bool is_zero_series() const {
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) {
      if (!is_zero(coeffs_.data()[i])) return false;
    }
    return true;
  }

  SeriesFunction& operator+=(const SeriesFunction& o) { return axpy(Scalar(1), o); }
  SeriesFunction& operator-=(const SeriesFunction& o) { return axpy(Scalar(-1), o); }
  SeriesFunction& axpy(const Scalar& a, const SeriesFunction& o) {
    if (o.dim() != dim() || o.n_max_ != n_max_) {
      throw Error(ErrorCode::kParameterMismatch, "series dimension or n_max differ");
    }
    if (o.radius() > radius()) *this = grown(o.radius());
    if (o.radius() == radius()) {
      coeffs_ += a * o.coeffs_;
    } else {
      for (std::int64_t i = 0; i < o.box_.size(); ++i) {
        coeffs_.row(box_.index(o.box_.point(i))) += a * o.coeffs_.row(i);
      }
    }
    return *this;
  }
  friend SeriesFunction operator+(SeriesFunction a, const SeriesFunction& b) { return a += b; }
  friend SeriesFunction operator-(SeriesFunction a, const SeriesFunction& b) { return a -= b; }

 private:
  void check(const LatticePoint& p, int n, const Scalar& v) {
    if (p.dim() != dim()) throw Error(ErrorCode::kDimensionMismatch, "series point dimension");
    if (n < 0 || n > n_max_) throw Error(ErrorCode::kOutOfRange, "degree beyond n_max");
    if (p.l1() > n && !is_zero(v)) {
      throw Error(ErrorCode::kOutOfRange, "coefficient of degree " + std::to_string(n) + " at " + p.str());
    }
    if (!box_.contains(p)) *this = grown(p.linf());
  }

  SeriesFunction grown(int new_radius) const {
    SeriesFunction out(dim(), new_radius, n_max_);
    for (std::int64_t i = 0; i < box_.size(); ++i) out.coeffs_.row(out.box_.index(box_.point(i))) = coeffs_.row(i);
    return out;
  }

  Box box_;
  int n_max_;
  Coeffs coeffs_;
};

template <typename Scalar>
SeriesFunction<Scalar> series_delta0(int dim, int n_max) {
  SeriesFunction<Scalar> s(dim, 0, n_max);
  s.set_coeff(LatticePoint(dim), 0, Scalar(1));
  return s;
}

// Convolution in x with polynomial multiplication in lambda, truncated at n_max.
template <typename Scalar>
SeriesFunction<Scalar> series_convolve(const SeriesFunction<Scalar>& f, const SeriesFunction<Scalar>& g) {
  if (f.dim() != g.dim() || f.n_max() != g.n_max()) {
    throw Error(ErrorCode::kParameterMismatch, "series_convolve needs equal dimension and n_max");
  }
  const int n_max = f.n_max();
  SeriesFunction<Scalar> out(f.dim(), std::min(f.radius() + g.radius(), n_max), n_max);
  const Box& bf = f.box();
  const Box& bg = g.box();
  const Box& bo = out.box();
  Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic> acc = out.coeffs();

  // Lowest nonzero degree per point prunes most of the work.
  auto lowest = [n_max](const auto& c, std::int64_t row) {
    for (int k = 0; k <= n_max; ++k) {
      if (!is_zero(c(row, k))) return k;
    }
    return n_max + 1;
  };
  std::vector<int> g_low(static_cast<std::size_t>(bg.size()));
  for (std::int64_t j = 0; j < bg.size(); ++j) g_low[static_cast<std::size_t>(j)] = lowest(g.coeffs(), j);

  for (std::int64_t i = 0; i < bf.size(); ++i) {
    const int fl = lowest(f.coeffs(), i);
    if (fl > n_max) continue;
    const LatticePoint y = bf.point(i);
    for (std::int64_t j = 0; j < bg.size(); ++j) {
      const int gl = g_low[static_cast<std::size_t>(j)];
      if (fl + gl > n_max) continue;
      const LatticePoint x = y + bg.point(j);
      if (!bo.contains(x)) continue;
      const std::int64_t o = bo.index(x);
      for (int a = fl; a <= n_max - gl; ++a) {
        const Scalar& fa = f.coeffs()(i, a);
        if (is_zero(fa)) continue;
        for (int b = gl; a + b <= n_max; ++b) {
          const Scalar& gb = g.coeffs()(j, b);
          if (!is_zero(gb)) acc(o, a + b) += fa * gb;
        }
      }
    }
  }
  for (std::int64_t r = 0; r < bo.size(); ++r) {
    const LatticePoint x = bo.point(r);
    for (int n = 0; n <= n_max; ++n) {
      if (!is_zero(acc(r, n))) out.set_coeff(x, n, acc(r, n));
    }
  }
  return out;
}

}  // namespace lacelab

#endif  // LACELAB_SERIES_HPP
