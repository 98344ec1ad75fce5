#pragma once

#include <cstdint>
#include <iosfwd>

namespace nashlab {

// Real number with a double mantissa and a 64-bit binary exponent.
//
// Quantities such as x^3 exp(-1/x^2) at x = 1e-7 are far below the smallest
// double, yet their ratios and logarithms are perfectly ordinary numbers. The
// closed-form interpreter and the pair distances of the regularity estimator
// are evaluated in this type so that log-log fits never see an underflow.
//
// Invariant: either mant_ == 0 (and exp_ == 0) or 0.5 <= |mant_| < 1.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double value);  // NOLINT(google-explicit-constructor): numeric promotion

  // Builds sign * exp(log_abs).
  static ExtReal from_log(double log_abs, int sign = 1);
  // Builds mant * 2^exp2.
  static ExtReal scaled(double mant, std::int64_t exp2);

  double mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp_; }

  bool is_zero() const { return mant_ == 0.0; }
  bool is_finite() const;
  int sign() const { return mant_ > 0 ? 1 : (mant_ < 0 ? -1 : 0); }

  // Nearest double; underflows to 0 and overflows to +-inf.
  double to_double() const;
  // Natural logarithm of |value|; -inf for zero.
  double log_abs() const;
  double log10_abs() const;

  ExtReal operator-() const;
  ExtReal& operator+=(const ExtReal& other);
  ExtReal& operator-=(const ExtReal& other);
  ExtReal& operator*=(const ExtReal& other);
  ExtReal& operator/=(const ExtReal& other);

  friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
  friend ExtReal operator-(ExtReal a, const ExtReal& b) { return a -= b; }
  friend ExtReal operator*(ExtReal a, const ExtReal& b) { return a *= b; }
  friend ExtReal operator/(ExtReal a, const ExtReal& b) { return a /= b; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.mant_ == b.mant_ && a.exp_ == b.exp_;
  }
  friend bool operator<(const ExtReal& a, const ExtReal& b);
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

 private:
  ExtReal(double mant, std::int64_t exp);
  void normalize();

  double mant_ = 0.0;
  std::int64_t exp_ = 0;
};

ExtReal abs(const ExtReal& x);
ExtReal exp(const ExtReal& x);
ExtReal log(const ExtReal& x);
ExtReal sqrt(const ExtReal& x);
// x^q; non-integer q requires x > 0.
ExtReal pow(const ExtReal& x, double q);
ExtReal ipow(ExtReal x, long n);
ExtReal max(const ExtReal& a, const ExtReal& b);

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

}  // namespace nashlab
