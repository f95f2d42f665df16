#ifndef LACELAB_RATIONAL_HPP
#define LACELAB_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include <Eigen/Core>

namespace lacelab {

// Exact rational number. Thin value wrapper over mpq_class that returns
// plain values from every operator, so it composes with Eigen containers
// (gmpxx expression templates do not).
class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : v_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(const mpz_class& v) : v_(v) {}

  // Parses "p/q" or "p". Throws lacelab::Error on malformed input.
  static Rational parse(std::string_view text);
  // Exact binary value of a finite double.
  static Rational from_double(double x);

  std::string str() const { return v_.get_str(); }
  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

Rational abs(const Rational& x);
Rational pow(const Rational& base, int exponent);

// Scalar helpers shared by the double and Rational code paths.
inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.to_double(); }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return x.is_zero(); }

template <typename Scalar>
Scalar scalar_from_ratio(long num, long den) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return Rational(num, den);
  } else {
    return static_cast<Scalar>(num) / static_cast<Scalar>(den);
  }
}

template <typename Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

}  // namespace lacelab

namespace Eigen {

template <>
struct NumTraits<lacelab::Rational> : GenericNumTraits<lacelab::Rational> {
  using Real = lacelab::Rational;
  using NonInteger = lacelab::Rational;
  using Nested = lacelab::Rational;
  using Literal = lacelab::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 32
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

#endif  // LACELAB_RATIONAL_HPP
