#ifndef LACELAB_LATTICE_HPP
#define LACELAB_LATTICE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lacelab/error.hpp"
#include "lacelab/rational.hpp"

namespace lacelab {

inline constexpr int kMaxDim = 8;

// Point of Z^d, 1 <= d <= kMaxDim.
class LatticePoint {
 public:
  explicit LatticePoint(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
      throw Error(ErrorCode::kOutOfRange, "dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
  }
  LatticePoint(std::initializer_list<int> coords) : LatticePoint(static_cast<int>(coords.size())) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  static LatticePoint unit(int dim, int axis, int sign = 1) {
    LatticePoint p(dim);
    p.c_[axis] = sign;
    return p;
  }

  int dim() const { return dim_; }
  int operator[](int i) const { return c_[i]; }
  int& operator[](int i) { return c_[i]; }

  std::int64_t norm2() const {
    std::int64_t s = 0;
    for (int i = 0; i < dim_; ++i) s += static_cast<std::int64_t>(c_[i]) * c_[i];
    return s;
  }
  double norm() const { return std::sqrt(static_cast<double>(norm2())); }
  int l1() const {
    int s = 0;
    for (int i = 0; i < dim_; ++i) s += std::abs(c_[i]);
    return s;
  }
  int linf() const {
    int s = 0;
    for (int i = 0; i < dim_; ++i) s = std::max(s, std::abs(c_[i]));
    return s;
  }
  bool is_origin() const { return linf() == 0; }

  // Representative of the orbit under coordinate permutations and sign flips:
  // absolute values sorted ascending.
  LatticePoint canonical() const {
    LatticePoint p(dim_);
    for (int i = 0; i < dim_; ++i) p.c_[i] = std::abs(c_[i]);
    std::sort(p.c_.begin(), p.c_.begin() + dim_);
    return p;
  }
  bool is_canonical() const {
    for (int i = 0; i < dim_; ++i) {
      if (c_[i] < 0 || (i > 0 && c_[i] < c_[i - 1])) return false;
    }
    return true;
  }

  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) {
    for (int i = 0; i < a.dim_; ++i) a.c_[i] += b.c_[i];
    return a;
  }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) {
    for (int i = 0; i < a.dim_; ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend LatticePoint operator-(LatticePoint a) {
    for (int i = 0; i < a.dim_; ++i) a.c_[i] = -a.c_[i];
    return a;
  }
  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.dim_ == b.dim_ && std::equal(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin());
  }
  friend std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) {
    if (a.dim_ != b.dim_) return a.dim_ <=> b.dim_;
    for (int i = 0; i < a.dim_; ++i) {
      if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
    }
    return std::strong_ordering::equal;
  }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < dim_; ++i) s += (i ? "," : "") + std::to_string(c_[i]);
    return s + ")";
  }

 private:
  int dim_;
  std::array<int, kMaxDim> c_{};
};

// |x|^alpha for the l2 norm, with the convention |0|^alpha = 1.
inline double radial_power(std::int64_t norm2, double alpha) {
  if (norm2 == 0) return 1.0;
  return std::pow(static_cast<double>(norm2), 0.5 * alpha);
}
inline double radial_power(const LatticePoint& x, double alpha) { return radial_power(x.norm2(), alpha); }

// Number of points in the orbit of a canonical point under the hyperoctahedral group.
std::int64_t orbit_size(const LatticePoint& canonical);

// The l-infinity box [-radius, radius]^dim with lexicographic (last axis fastest) indexing.
class Box {
 public:
  Box(int dim, int radius) : dim_(dim), radius_(radius), side_(2 * radius + 1) {
    if (dim < 1 || dim > kMaxDim) throw Error(ErrorCode::kOutOfRange, "box dimension");
    if (radius < 0) throw Error(ErrorCode::kOutOfRange, "negative box radius");
    std::int64_t s = 1;
    for (int i = dim - 1; i >= 0; --i) {
      stride_[i] = s;
      if (s > std::numeric_limits<std::int64_t>::max() / side_) {
        throw Error(ErrorCode::kTooLarge, "box too large");
      }
      s *= side_;
    }
    size_ = s;
  }

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  std::int64_t side() const { return side_; }
  std::int64_t size() const { return size_; }
  std::int64_t stride(int axis) const { return stride_[axis]; }

  bool contains(const LatticePoint& p) const { return p.linf() <= radius_; }
  std::int64_t index(const LatticePoint& p) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx += (p[i] + radius_) * stride_[i];
    return idx;
  }
  LatticePoint point(std::int64_t idx) const {
    LatticePoint p(dim_);
    for (int i = 0; i < dim_; ++i) {
      p[i] = static_cast<int>(idx / stride_[i]) - radius_;
      idx %= stride_[i];
    }
    return p;
  }

 private:
  int dim_;
  int radius_;
  std::int64_t side_;
  std::int64_t size_ = 1;
  std::array<std::int64_t, kMaxDim> stride_{};
};

// Enumerates the canonical points (sorted non-negative coordinates) of a box,
// in lexicographic order.
std::vector<LatticePoint> canonical_points(int dim, int radius);

// A finitely supported function Z^d -> Scalar, stored densely on the box of its
// current radius. Values outside the box are zero. radius_cap is the configured
// R_max: operations that would grow the support beyond it clip and record the
// dropped absolute mass in truncation_bound().
template <typename Scalar>
class LatticeFunction {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  LatticeFunction(int dim, int radius_cap) : LatticeFunction(Box(dim, 0), radius_cap) {}
  LatticeFunction(Box box, int radius_cap)
      : box_(box), cap_(std::max(radius_cap, box.radius())), values_(Values::Zero(box.size())) {}
  LatticeFunction(Box box, int radius_cap, Values values)
      : box_(box), cap_(std::max(radius_cap, box.radius())), values_(std::move(values)) {
    if (values_.size() != box_.size()) throw Error(ErrorCode::kParameterMismatch, "value count vs box");
  }

  template <typename F>
  static LatticeFunction generate(int dim, int radius, int radius_cap, F&& fn) {
    LatticeFunction out(Box(dim, radius), radius_cap);
    for (std::int64_t i = 0; i < out.box_.size(); ++i) out.values_[i] = fn(out.box_.point(i));
    return out;
  }

  int dim() const { return box_.dim(); }
  int radius() const { return box_.radius(); }
  int radius_cap() const { return cap_; }
  const Box& box() const { return box_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }

  Scalar operator()(const LatticePoint& p) const {
    check_dim(p);
    return box_.contains(p) ? values_[box_.index(p)] : Scalar(0);
  }

  // Sets a value, growing the stored box if needed. Points beyond radius_cap are rejected.
  void set(const LatticePoint& p, const Scalar& v) {
    check_dim(p);
    if (!box_.contains(p)) {
      if (p.linf() > cap_) {
        throw Error(ErrorCode::kOutOfRange, "point " + p.str() + " beyond R_max " + std::to_string(cap_));
      }
      *this = resized(p.linf());
    }
    values_[box_.index(p)] = v;
  }
  void add(const LatticePoint& p, const Scalar& v) { set(p, (*this)(p) + v); }

  bool truncated() const { return truncated_; }
  double truncation_bound() const { return truncation_bound_; }
  void record_truncation(double dropped_mass) {
    if (dropped_mass > 0.0 || truncated_) truncated_ = true;
    truncation_bound_ += dropped_mass;
  }
  void mark_truncated() { truncated_ = true; }

  // Calls fn(point, value) for every nonzero value, in lexicographic order.
  template <typename F>
  void for_each_nonzero(F&& fn) const {
    for (std::int64_t i = 0; i < box_.size(); ++i) {
      if (!is_zero(values_[i])) fn(box_.point(i), values_[i]);
    }
  }

  std::int64_t nonzero_count() const {
    std::int64_t n = 0;
    for (std::int64_t i = 0; i < box_.size(); ++i) n += is_zero(values_[i]) ? 0 : 1;
    return n;
  }

  Scalar sum() const {
    Scalar s(0);
    for (std::int64_t i = 0; i < box_.size(); ++i) s += values_[i];
    return s;
  }

  // Copy on a box of a different radius. Shrinking drops mass and flags truncation.
  LatticeFunction resized(int new_radius) const {
    LatticeFunction out(Box(dim(), new_radius), std::max(cap_, new_radius));
    out.truncated_ = truncated_;
    out.truncation_bound_ = truncation_bound_;
    double dropped = 0.0;
    for (std::int64_t i = 0; i < box_.size(); ++i) {
      if (is_zero(values_[i])) continue;
      const LatticePoint p = box_.point(i);
      if (out.box_.contains(p)) {
        out.values_[out.box_.index(p)] = values_[i];
      } else {
        dropped += std::abs(to_double(values_[i]));
      }
    }
    if (dropped > 0.0) out.record_truncation(dropped);
    return out;
  }

  // Smallest box holding the support.
  LatticeFunction trimmed() const {
    int r = 0;
    for (std::int64_t i = 0; i < box_.size(); ++i) {
      if (!is_zero(values_[i])) r = std::max(r, box_.point(i).linf());
    }
    return r == radius() ? *this : resized(r);
  }

  LatticeFunction& operator+=(const LatticeFunction& o) { return axpy(Scalar(1), o); }
  LatticeFunction& operator-=(const LatticeFunction& o) { return axpy(Scalar(-1), o); }
  LatticeFunction& operator*=(const Scalar& s) {
    values_ *= s;
    truncation_bound_ *= std::abs(to_double(s));
    return *this;
  }

  // this += a * o
  LatticeFunction& axpy(const Scalar& a, const LatticeFunction& o) {
    if (o.dim() != dim()) throw Error(ErrorCode::kDimensionMismatch, "axpy");
    if (o.radius() > radius()) *this = resized(o.radius());
    cap_ = std::max(cap_, o.cap_);
    if (o.radius() == radius()) {
      values_ += a * o.values_;
    } else {
      for (std::int64_t i = 0; i < o.box_.size(); ++i) {
        if (!is_zero(o.values_[i])) values_[box_.index(o.box_.point(i))] += a * o.values_[i];
      }
    }
    truncated_ = truncated_ || o.truncated_;
    truncation_bound_ += std::abs(to_double(a)) * o.truncation_bound_;
    return *this;
  }

  friend LatticeFunction operator+(LatticeFunction a, const LatticeFunction& b) { return a += b; }
  friend LatticeFunction operator-(LatticeFunction a, const LatticeFunction& b) { return a -= b; }
  friend LatticeFunction operator*(const Scalar& s, LatticeFunction a) { return a *= s; }

  // Exact equality of values (box sizes may differ).
  friend bool operator==(const LatticeFunction& a, const LatticeFunction& b) {
    if (a.dim() != b.dim()) return false;
    const LatticeFunction& big = a.radius() >= b.radius() ? a : b;
    const LatticeFunction& small = a.radius() >= b.radius() ? b : a;
    for (std::int64_t i = 0; i < big.box_.size(); ++i) {
      const LatticePoint p = big.box_.point(i);
      if (!(big.values_[i] == small(p))) return false;
    }
    return true;
  }

 private:
  void check_dim(const LatticePoint& p) const {
    if (p.dim() != dim()) throw Error(ErrorCode::kDimensionMismatch, "point dimension");
  }

  Box box_;
  int cap_;
  Values values_;
  bool truncated_ = false;
  double truncation_bound_ = 0.0;
};

template <typename Scalar>
LatticeFunction<Scalar> delta0(int dim, int radius_cap = 0) {
  LatticeFunction<Scalar> f(dim, radius_cap);
  f.values()[0] = Scalar(1);
  return f;
}

// 1 at the origin, -mu at the 2d unit neighbours.
template <typename Scalar>
LatticeFunction<Scalar> delta_rw(int dim, const Scalar& mu, int radius_cap = 1) {
  LatticeFunction<Scalar> f(Box(dim, 1), std::max(radius_cap, 1));
  f.set(LatticePoint(dim), Scalar(1));
  for (int i = 0; i < dim; ++i) {
    f.set(LatticePoint::unit(dim, i, 1), -mu);
    f.set(LatticePoint::unit(dim, i, -1), -mu);
  }
  return f;
}

// Invariance under coordinate permutations and sign flips (exact comparison).
template <typename Scalar>
bool is_symmetric(const LatticeFunction<Scalar>& f) {
  const Box& b = f.box();
  for (std::int64_t i = 0; i < b.size(); ++i) {
    const LatticePoint p = b.point(i);
    if (!(f.values()[i] == f.values()[b.index(p.canonical())])) return false;
  }
  return true;
}

// Largest |f(x) - f(canonical(x))|, for float-mode symmetry checks.
template <typename Scalar>
double symmetry_defect(const LatticeFunction<Scalar>& f) {
  const Box& b = f.box();
  double worst = 0.0;
  for (std::int64_t i = 0; i < b.size(); ++i) {
    const LatticePoint p = b.point(i);
    worst = std::max(worst, std::abs(to_double(f.values()[i] - f.values()[b.index(p.canonical())])));
  }
  return worst;
}

template <typename Scalar>
Scalar l1_norm(const LatticeFunction<Scalar>& f) {
  Scalar s(0);
  for (std::int64_t i = 0; i < f.box().size(); ++i) {
    const Scalar& v = f.values()[i];
    s += (v < Scalar(0)) ? Scalar(-v) : v;
  }
  return s;
}

// sup_x |f(x)| |x|^d, with the origin weighted by 1.
template <typename Scalar>
double weighted_sup(const LatticeFunction<Scalar>& f) {
  const int d = f.dim();
  double s = 0.0;
  for (std::int64_t i = 0; i < f.box().size(); ++i) {
    if (is_zero(f.values()[i])) continue;
    const double v = std::abs(to_double(f.values()[i]));
    s = std::max(s, v * radial_power(f.box().point(i), d));
  }
  return s;
}

// max( sum_x |f(x)|, sup_x |f(x)| |x|^d ).
template <typename Scalar>
double banach_norm(const LatticeFunction<Scalar>& f) {
  return std::max(to_double(l1_norm(f)), weighted_sup(f));
}

enum class ConvolvePath { kAuto, kGeneral, kSymmetric };

namespace detail {

template <typename Scalar>
double abs_d(const Scalar& v) {
  return std::abs(to_double(v));
}

template <typename Scalar>
LatticeFunction<Scalar> convolve_general(const LatticeFunction<Scalar>& f, const LatticeFunction<Scalar>& g,
                                         int out_radius, int cap) {
  const int d = f.dim();
  const Box& bf = f.box();
  const Box& bg = g.box();
  const Box bo(d, out_radius);
  LatticeFunction<Scalar> out(bo, cap);
  const int rf = bf.radius();
  const int rg = bg.radius();
  const int ro = out_radius;
  const bool clipping = rf + rg > ro;
  const std::int64_t side_g = bg.side();

  // Per-row cumulative |g| along the last axis, used to account for clipped mass.
  std::vector<double> row_cum;
  double g_l1 = 0.0;
  if (clipping) {
    const std::int64_t rows = bg.size() / side_g;
    row_cum.assign(static_cast<std::size_t>(rows * (side_g + 1)), 0.0);
    for (std::int64_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (std::int64_t k = 0; k < side_g; ++k) {
        acc += abs_d(g.values()[r * side_g + k]);
        row_cum[static_cast<std::size_t>(r * (side_g + 1) + k + 1)] = acc;
      }
      g_l1 += acc;
    }
  }

  std::array<int, kMaxDim> lo{}, hi{}, z{};
  double clipped = 0.0;
  for (std::int64_t fi = 0; fi < bf.size(); ++fi) {
    const Scalar& fy = f.values()[fi];
    if (is_zero(fy)) continue;
    const LatticePoint y = bf.point(fi);
    bool empty = false;
    for (int i = 0; i < d; ++i) {
      lo[i] = std::max(-rg, -ro - y[i]);
      hi[i] = std::min(rg, ro - y[i]);
      if (lo[i] > hi[i]) empty = true;
    }
    double inner_mass = 0.0;
    if (!empty) {
      for (int i = 0; i < d - 1; ++i) z[i] = lo[i];
      const int last = d - 1;
      const std::int64_t len = hi[last] - lo[last] + 1;
      while (true) {
        std::int64_t gi = (lo[last] + rg);
        std::int64_t oi = (y[last] + lo[last] + ro);
        for (int i = 0; i < last; ++i) {
          gi += (z[i] + rg) * bg.stride(i);
          oi += (y[i] + z[i] + ro) * bo.stride(i);
        }
        out.values().segment(oi, len) += fy * g.values().segment(gi, len);
        if (clipping) {
          const std::int64_t row = (gi - (lo[last] + rg)) / side_g;
          const std::size_t base = static_cast<std::size_t>(row * (side_g + 1));
          inner_mass += row_cum[base + static_cast<std::size_t>(hi[last] + rg + 1)] -
                        row_cum[base + static_cast<std::size_t>(lo[last] + rg)];
        }
        int axis = last - 1;
        while (axis >= 0 && z[axis] == hi[axis]) {
          z[axis] = lo[axis];
          --axis;
        }
        if (axis < 0) break;
        ++z[axis];
      }
    }
    if (clipping) clipped += abs_d(fy) * std::max(0.0, g_l1 - inner_mass);
  }
  if (clipping) out.record_truncation(clipped);
  return out;
}

// Output evaluated at canonical points only, then filled by symmetry. Valid when
// both inputs are invariant under the hyperoctahedral group.
template <typename Scalar>
LatticeFunction<Scalar> convolve_symmetric(const LatticeFunction<Scalar>& f, const LatticeFunction<Scalar>& g,
                                           int out_radius, int cap) {
  const int d = f.dim();
  const Box& bf = f.box();
  const Box& bg = g.box();
  const Box bo(d, out_radius);
  LatticeFunction<Scalar> out(bo, cap);
  const int rf = bf.radius();
  const int rg = bg.radius();
  const bool clipping = rf + rg > out_radius;
  const int last = d - 1;
  double inside_mass = 0.0;

  std::array<int, kMaxDim> lo{}, hi{}, y{};
  for (const LatticePoint& x : canonical_points(d, out_radius)) {
    Scalar acc(0);
    double acc_abs = 0.0;
    bool empty = false;
    for (int i = 0; i < d; ++i) {
      lo[i] = std::max(-rf, x[i] - rg);
      hi[i] = std::min(rf, x[i] + rg);
      if (lo[i] > hi[i]) empty = true;
    }
    if (!empty) {
      for (int i = 0; i < last; ++i) y[i] = lo[i];
      while (true) {
        std::int64_t fi = lo[last] + rf;
        std::int64_t gi = x[last] - lo[last] + rg;
        for (int i = 0; i < last; ++i) {
          fi += (y[i] + rf) * bf.stride(i);
          gi += (x[i] - y[i] + rg) * bg.stride(i);
        }
        const std::int64_t len = hi[last] - lo[last] + 1;
        const Scalar* fp = f.values().data() + fi;
        const Scalar* gp = g.values().data() + gi;
        for (std::int64_t k = 0; k < len; ++k) {
          acc += fp[k] * gp[-k];
          if (clipping) acc_abs += abs_d(fp[k]) * abs_d(gp[-k]);
        }
        int axis = last - 1;
        while (axis >= 0 && y[axis] == hi[axis]) {
          y[axis] = lo[axis];
          --axis;
        }
        if (axis < 0) break;
        ++y[axis];
      }
    }
    out.values()[bo.index(x)] = acc;
    if (clipping) inside_mass += static_cast<double>(orbit_size(x)) * acc_abs;
  }
  for (std::int64_t i = 0; i < bo.size(); ++i) {
    const LatticePoint p = bo.point(i);
    if (!p.is_canonical()) out.values()[i] = out.values()[bo.index(p.canonical())];
  }
  if (clipping) {
    const double total = abs_d(l1_norm(f)) * abs_d(l1_norm(g));
    out.record_truncation(std::max(0.0, total - inside_mass));
  }
  return out;
}

}  // namespace detail

// (f*g)(x) = sum_y f(y) g(x-y), clipped to the larger of the two radius caps.
// Summation order is lexicographic over the support of f.
template <typename Scalar>
LatticeFunction<Scalar> convolve(const LatticeFunction<Scalar>& f, const LatticeFunction<Scalar>& g,
                                 ConvolvePath path = ConvolvePath::kAuto) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::kDimensionMismatch, "convolve");
  const int cap = std::max(f.radius_cap(), g.radius_cap());
  const int out_radius = std::min(f.radius() + g.radius(), cap);
  bool symmetric = path == ConvolvePath::kSymmetric;
  if (path == ConvolvePath::kAuto && f.dim() >= 2 && Box(f.dim(), out_radius).size() > 4096) {
    symmetric = is_symmetric(f) && is_symmetric(g);
  }
  LatticeFunction<Scalar> out = symmetric ? detail::convolve_symmetric(f, g, out_radius, cap)
                                          : detail::convolve_general(f, g, out_radius, cap);
  if (f.truncated() || g.truncated()) {
    const double nf = to_double(l1_norm(f));
    const double ng = to_double(l1_norm(g));
    out.record_truncation(f.truncation_bound() * ng + g.truncation_bound() * nf +
                          f.truncation_bound() * g.truncation_bound());
    out.mark_truncated();
  }
  return out;
}

template <typename Scalar>
struct NeumannResult {
  LatticeFunction<Scalar> inverse;
  int terms = 0;                 // number of powers (delta0 - f)^k summed, k >= 1
  double input_distance = 0.0;   // ||f - delta0||
  double residual = 0.0;         // ||f * inverse - delta0||
  double inverse_distance = 0.0; // ||inverse - delta0||
  double bound = 0.0;            // 2^{d+1} r / (1 - 2^{d+1} r), r = input_distance
  bool bound_holds = false;
};

// Inverse of f in the convolution algebra via sum_k (delta0 - f)^{*k}. Requires
// ||f - delta0|| < 2^{-d-1}; stops once a term has norm below tol.
template <typename Scalar>
NeumannResult<Scalar> neumann_invert(const LatticeFunction<Scalar>& f, double tol, int max_terms) {
  const int d = f.dim();
  const double algebra_const = std::ldexp(1.0, d + 1);
  LatticeFunction<Scalar> h = delta0<Scalar>(d, f.radius_cap()) - f;
  NeumannResult<Scalar> res{delta0<Scalar>(d, f.radius_cap())};
  res.input_distance = banach_norm(h);
  if (!(res.input_distance < 1.0 / algebra_const)) {
    throw Error(ErrorCode::kPrecondition, "||f - delta0|| = " + std::to_string(res.input_distance) +
                                              " is not below 2^{-d-1}");
  }
  LatticeFunction<Scalar> term = delta0<Scalar>(d, f.radius_cap());
  bool converged = false;
  for (int k = 1; k <= max_terms; ++k) {
    term = convolve(h, term);
    res.inverse += term;
    res.terms = k;
    if (banach_norm(term) < tol) {
      converged = true;
      break;
    }
  }
  if (!converged && !is_zero(h.sum()) && banach_norm(h) != 0.0) {
    throw Error(ErrorCode::kNotConverged, "Neumann series did not reach tol within " +
                                              std::to_string(max_terms) + " terms");
  }
  res.residual = banach_norm(convolve(f, res.inverse) - delta0<Scalar>(d));
  res.inverse_distance = banach_norm(res.inverse - delta0<Scalar>(d));
  const double r = algebra_const * res.input_distance;
  res.bound = r / (1.0 - r);
  res.bound_holds = res.inverse_distance <= res.bound * (1.0 + 1e-12) + 1e-300;
  return res;
}

}  // namespace lacelab

#endif  // LACELAB_LATTICE_HPP
