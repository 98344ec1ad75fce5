#include "nashlab/ext_real.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace nashlab {

namespace {

constexpr long double kLn2 = 0.693147180559945309417232121458176568L;
constexpr long double kLog2e = 1.442695040888963407359924681001892137L;
// Beyond this exponent gap the smaller addend is below half an ulp.
constexpr std::int64_t kAddCutoff = 1100;

}  // namespace

ExtReal::ExtReal(double value) : mant_(value), exp_(0) { normalize(); }

ExtReal::ExtReal(double mant, std::int64_t exp) : mant_(mant), exp_(exp) { normalize(); }

ExtReal ExtReal::scaled(double mant, std::int64_t exp2) { return ExtReal(mant, exp2); }

void ExtReal::normalize() {
  if (mant_ == 0.0 || !std::isfinite(mant_)) {
    if (mant_ == 0.0) exp_ = 0;
    return;
  }
  int k = 0;
  mant_ = std::frexp(mant_, &k);
  exp_ += k;
}

ExtReal ExtReal::from_log(double log_abs, int sign) {
  if (std::isnan(log_abs)) return ExtReal(std::numeric_limits<double>::quiet_NaN());
  if (log_abs == -std::numeric_limits<double>::infinity() || sign == 0) return ExtReal();
  if (log_abs == std::numeric_limits<double>::infinity()) {
    return ExtReal(sign * std::numeric_limits<double>::infinity());
  }
  const long double l2 = static_cast<long double>(log_abs) * kLog2e;
  const long double k = std::floor(l2);
  // Reduce in natural-log units so the fractional part keeps long double precision.
  const long double r = static_cast<long double>(log_abs) - k * kLn2;
  return ExtReal(static_cast<double>(sign * std::exp(r)), static_cast<std::int64_t>(k));
}

bool ExtReal::is_finite() const { return std::isfinite(mant_); }

double ExtReal::to_double() const {
  if (mant_ == 0.0 || !std::isfinite(mant_)) return mant_;
  if (exp_ > 2000) return mant_ > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
  if (exp_ < -2000) return 0.0 * mant_;
  return std::ldexp(mant_, static_cast<int>(exp_));
}

double ExtReal::log_abs() const {
  if (mant_ == 0.0) return -std::numeric_limits<double>::infinity();
  if (!std::isfinite(mant_)) return std::fabs(mant_);
  return static_cast<double>(std::log(std::fabs(static_cast<long double>(mant_))) +
                             static_cast<long double>(exp_) * kLn2);
}

double ExtReal::log10_abs() const {
  return log_abs() / std::log(10.0);
}

ExtReal ExtReal::operator-() const {
  ExtReal out = *this;
  out.mant_ = -out.mant_;
  return out;
}

ExtReal& ExtReal::operator+=(const ExtReal& other) {
  if (other.mant_ == 0.0) return *this;
  if (mant_ == 0.0) return *this = other;
  if (!std::isfinite(mant_) || !std::isfinite(other.mant_)) {
    mant_ += other.mant_;
    return *this;
  }
  const ExtReal& big = exp_ >= other.exp_ ? *this : other;
  const ExtReal& small = exp_ >= other.exp_ ? other : *this;
  const std::int64_t gap = big.exp_ - small.exp_;
  if (gap > kAddCutoff) return *this = big;
  const double m = big.mant_ + std::ldexp(small.mant_, static_cast<int>(-gap));
  *this = ExtReal(m, big.exp_);
  return *this;
}

ExtReal& ExtReal::operator-=(const ExtReal& other) { return *this += -other; }

ExtReal& ExtReal::operator*=(const ExtReal& other) {
  if (mant_ == 0.0 || other.mant_ == 0.0) {
    if (std::isfinite(mant_) && std::isfinite(other.mant_)) return *this = ExtReal();
  }
  *this = ExtReal(mant_ * other.mant_, exp_ + other.exp_);
  return *this;
}

ExtReal& ExtReal::operator/=(const ExtReal& other) {
  if (other.mant_ == 0.0) {
    mant_ = mant_ / 0.0;
    exp_ = 0;
    return *this;
  }
  if (mant_ == 0.0) return *this;
  *this = ExtReal(mant_ / other.mant_, exp_ - other.exp_);
  return *this;
}

bool operator<(const ExtReal& a, const ExtReal& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (!std::isfinite(a.mant_) || !std::isfinite(b.mant_)) return a.mant_ < b.mant_;
  if (sa != sb) return sa < sb;
  if (sa == 0) return false;
  if (a.exp_ != b.exp_) return sa > 0 ? a.exp_ < b.exp_ : a.exp_ > b.exp_;
  return a.mant_ < b.mant_;
}

ExtReal abs(const ExtReal& x) { return x.sign() < 0 ? -x : x; }

ExtReal exp(const ExtReal& x) {
  const double v = x.to_double();
  return ExtReal::from_log(v, 1);
}

ExtReal log(const ExtReal& x) {
  if (x.sign() < 0) return ExtReal(std::numeric_limits<double>::quiet_NaN());
  return ExtReal(x.log_abs());
}

ExtReal sqrt(const ExtReal& x) { return pow(x, 0.5); }

ExtReal pow(const ExtReal& x, double q) {
  if (q == std::floor(q) && std::fabs(q) < 1e6) return ipow(x, static_cast<long>(q));
  if (x.sign() < 0) return ExtReal(std::numeric_limits<double>::quiet_NaN());
  if (x.is_zero()) return q > 0 ? ExtReal() : ExtReal(std::numeric_limits<double>::infinity());
  // log2 of the result, split so the integer part never passes through a double.
  const long double l2 = static_cast<long double>(q) *
                         (std::log2(static_cast<long double>(x.mantissa())) +
                          static_cast<long double>(x.exponent()));
  const long double k = std::floor(l2);
  return ExtReal::scaled(static_cast<double>(std::exp2(l2 - k)), static_cast<std::int64_t>(k));
}

ExtReal ipow(ExtReal x, long n) {
  if (n < 0) return ExtReal(1.0) / ipow(x, -n);
  ExtReal result(1.0);
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
  if (x.is_zero()) return os << 0.0;
  const double l10 = x.log10_abs();
  if (std::fabs(l10) < 300) return os << x.to_double();
  const double e10 = std::floor(l10);
  return os << (x.sign() < 0 ? "-" : "") << std::pow(10.0, l10 - e10) << "e" << static_cast<long long>(e10);
}

}  // namespace nashlab
