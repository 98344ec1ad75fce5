#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nashlab/error.hpp"

namespace nashlab::poly {

using Rational = boost::multiprecision::cpp_rational;
using Exponent = std::vector<unsigned>;

unsigned total_degree(const Exponent& e);

// Graded lexicographic order, largest monomial first.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

using TermMap = std::map<Exponent, Rational, GrlexGreater>;

// Sparse multivariate polynomial with exact rational coefficients.
// Immutable: every operation returns a new value.
class Polynomial {
 public:
  explicit Polynomial(std::size_t num_vars = 1);
  Polynomial(std::size_t num_vars, TermMap terms);

  static Polynomial constant(std::size_t num_vars, const Rational& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Total degree; -1 for the zero polynomial.
  int degree() const;
  // Lowest total degree among the terms; -1 for the zero polynomial.
  int min_degree() const;
  bool is_homogeneous() const;
  Rational coefficient(const Exponent& e) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned k) const;
  Polynomial derivative(std::size_t var) const;
  // Homogeneous component of the given total degree.
  Polynomial homogeneous_part(unsigned degree) const;
  // q(x) = p(x + shift).
  Polynomial translate(std::span<const Rational> shift) const;

  // Floating-point evaluation; T is double or std::complex<double>.
  template <typename T>
  T evaluate(std::span<const T> point) const;

  // Sum of |c_a| |x^a|, the natural scale for residual and gradient tolerances.
  double abs_term_sum(std::span<const double> point) const;

  Rational evaluate_exact(std::span<const Rational> point) const;

 private:
  void check_dims(std::size_t n) const;

  std::size_t num_vars_;
  TermMap terms_;
  // Double-precision copy of the coefficients, in term order.
  std::vector<double> dcoeff_;
};

// Checked evaluation on a real point.
double evaluate(const Polynomial& p, std::span<const double> point);

std::vector<Polynomial> gradient(const Polynomial& p);

// Lowest-degree homogeneous part of p translated so that base sits at the origin.
Polynomial initial_form(const Polynomial& p, std::span<const Rational> base);

// Exact rational value of a double (every finite double is a dyadic rational).
Rational to_rational(double x);
double to_double(const Rational& q);

template <typename T>
T Polynomial::evaluate(std::span<const T> point) const {
  check_dims(point.size());
  if (terms_.empty()) return T(0.0);
  // Power tables up to the maximum exponent of each variable.
  std::vector<std::vector<T>> powers(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) {
    unsigned max_e = 0;
    for (const auto& [e, c] : terms_) max_e = std::max(max_e, e[i]);
    powers[i].resize(max_e + 1);
    powers[i][0] = T(1.0);
    for (unsigned k = 1; k <= max_e; ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  T sum(0.0);
  std::size_t idx = 0;
  for (const auto& [e, c] : terms_) {
    T term(dcoeff_[idx++]);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] != 0) term *= powers[i][e[i]];
    }
    sum += term;
  }
  return sum;
}

}  // namespace nashlab::poly
