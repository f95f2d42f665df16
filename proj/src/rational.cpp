#include "lacelab/rational.hpp"

#include <cmath>

#include "lacelab/error.hpp"

namespace lacelab {

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) throw Error(ErrorCode::kOutOfRange, "rational with zero denominator");
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::kOutOfRange, "rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\n')) s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw Error(ErrorCode::kIo, "malformed rational '" + s + "'");
  }
  if (sgn(q.get_den()) == 0) throw Error(ErrorCode::kIo, "zero denominator in '" + s + "'");
  q.canonicalize();
  return Rational(q);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kOutOfRange, "non-finite double");
  return Rational(mpq_class(x));
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) return Rational(1) / pow(base, -exponent);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(mpq_class(num, den));
}

}  // namespace lacelab
