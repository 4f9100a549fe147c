#ifndef CRNKIT_RATIONAL_HPP
#define CRNKIT_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crnkit {

/// Exact rational number. Always kept in lowest terms with a positive
/// denominator (canonicalized by GMP). Decimal literals such as "0.36"
/// convert exactly (36/100 reduced to 9/25).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(static_cast<signed long>(n)) {}
  Rational(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "3", "-7/2", "0.36", "9.4", "-1.25e0" is not supported; plain
  /// integers, fractions, and decimal strings only.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("Rational: empty literal");
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      mpq_class q;
      if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational: bad literal '" + s + "'");
      q.canonicalize();
      return Rational(q);
    }
    // decimal: sign? digits '.' digits
    std::string intpart = s.substr(0, dot);
    std::string fracpart = s.substr(dot + 1);
    if (fracpart.empty() || fracpart.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("Rational: bad decimal '" + s + "'");
    bool neg = false;
    if (!intpart.empty() && (intpart[0] == '+' || intpart[0] == '-')) {
      neg = intpart[0] == '-';
      intpart = intpart.substr(1);
    }
    if (!intpart.empty() && intpart.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("Rational: bad decimal '" + s + "'");
    if (intpart.empty()) intpart = "0";
    // base 10 explicitly: the default base 0 would read a leading zero
    // (e.g. "025" from "0.25") as octal
    mpz_class num(intpart + fracpart, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fracpart.size());
    mpq_class q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return Rational(q);
  }

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }

  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

}  // namespace crnkit

#endif  // CRNKIT_RATIONAL_HPP
