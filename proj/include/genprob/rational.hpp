#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace genprob {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number over arbitrary-precision integers.
///
/// Values are always kept normalized (denominator > 0, gcd(num, den) = 1),
/// so operator== is value equality and rendering is canonical. Nothing in
/// this class ever rounds; conversion to double is explicit and used for
/// display only.
class Rational {
public:
  Rational() = default;
  Rational(long long value) : value_(value) {}
  Rational(const BigInt& value) : value_(value) {}
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) {
      throw std::domain_error("Rational: zero denominator");
    }
    // The underlying representation insists on a positive denominator, so
    // move the sign to the numerator up front.
    value_ = den < 0 ? Rep(-num, -den) : Rep(num, den);
  }

  /// 2^exponent, exact for either sign of the exponent.
  static Rational pow2(long exponent) {
    Rational r;
    if (exponent >= 0) {
      r.value_ = BigInt(1) << exponent;
    } else {
      r.value_ = Rep(BigInt(1), BigInt(1) << -exponent);
    }
    return r;
  }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_ == 0; }
  bool is_integer() const { return denominator() == 1; }

  double to_double() const { return value_.convert_to<double>(); }

  /// Canonical "num/den" form; the denominator is always printed ("1/1").
  std::string to_string() const {
    return numerator().str() + "/" + denominator().str();
  }

  Rational& operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) {
      throw std::domain_error("Rational: division by zero");
    }
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.value_ = -a.value_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

private:
  using Rep = boost::multiprecision::cpp_rational;
  Rep value_{0};
};

}  // namespace genprob
