#include "nashlab/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace nashlab::poly {

unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

bool GrlexGreater::operator()(const Exponent& a, const Exponent& b) const {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw Error(ErrorKind::DimensionMismatch, "polynomial needs at least one variable");
}

Polynomial::Polynomial(std::size_t num_vars, TermMap terms) : Polynomial(num_vars) {
  for (auto& [e, c] : terms) {
    if (e.size() != num_vars) {
      throw Error(ErrorKind::DimensionMismatch, "exponent length differs from num_vars");
    }
    if (c != 0) terms_.emplace(e, c);
  }
  dcoeff_.reserve(terms_.size());
  for (const auto& [e, c] : terms_) dcoeff_.push_back(to_double(c));
}

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
  TermMap t;
  t.emplace(Exponent(num_vars, 0), c);
  return Polynomial(num_vars, std::move(t));
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw Error(ErrorKind::DimensionMismatch, "variable index out of range");
  Exponent e(num_vars, 0);
  e[index] = 1;
  TermMap t;
  t.emplace(std::move(e), Rational(1));
  return Polynomial(num_vars, std::move(t));
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(total_degree(terms_.begin()->first));
}

int Polynomial::min_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(total_degree(terms_.rbegin()->first));
}

bool Polynomial::is_homogeneous() const { return degree() == min_degree(); }

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::check_dims(std::size_t n) const {
  if (n != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch,
                "point has " + std::to_string(n) + " coordinates, polynomial has " +
                    std::to_string(num_vars_) + " variables");
  }
}

Polynomial Polynomial::operator-() const {
  TermMap t = terms_;
  for (auto& [e, c] : t) c = -c;
  return Polynomial(num_vars_, std::move(t));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  a.check_dims(b.num_vars_);
  TermMap t = a.terms_;
  for (const auto& [e, c] : b.terms_) t[e] += c;
  return Polynomial(a.num_vars_, std::move(t));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_dims(b.num_vars_);
  TermMap t;
  Exponent e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      t[e] += ca * cb;
    }
  }
  return Polynomial(a.num_vars_, std::move(t));
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
  TermMap t = p.terms_;
  for (auto& [e, v] : t) v *= c;
  return Polynomial(p.num_vars_, std::move(t));
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(num_vars_, 1);
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= num_vars_) throw Error(ErrorKind::DimensionMismatch, "derivative variable out of range");
  TermMap t;
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    t[d] += c * e[var];
  }
  return Polynomial(num_vars_, std::move(t));
}

Polynomial Polynomial::homogeneous_part(unsigned degree) const {
  TermMap t;
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) == degree) t.emplace(e, c);
  }
  return Polynomial(num_vars_, std::move(t));
}

Polynomial Polynomial::translate(std::span<const Rational> shift) const {
  check_dims(shift.size());
  std::vector<Polynomial> shifted_vars;
  shifted_vars.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) {
    shifted_vars.push_back(variable(num_vars_, i) + constant(num_vars_, shift[i]));
  }
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(num_vars_, c);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] != 0) term = term * shifted_vars[i].pow(e[i]);
    }
    out = out + term;
  }
  return out;
}

double Polynomial::abs_term_sum(std::span<const double> point) const {
  check_dims(point.size());
  double sum = 0.0;
  std::size_t idx = 0;
  for (const auto& [e, c] : terms_) {
    double term = std::fabs(dcoeff_[idx++]);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] != 0) term *= std::pow(std::fabs(point[i]), static_cast<double>(e[i]));
    }
    sum += term;
  }
  return sum;
}

Rational Polynomial::evaluate_exact(std::span<const Rational> point) const {
  check_dims(point.size());
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

double evaluate(const Polynomial& p, std::span<const double> point) { return p.evaluate(point); }

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> out;
  out.reserve(p.num_vars());
  for (std::size_t i = 0; i < p.num_vars(); ++i) out.push_back(p.derivative(i));
  return out;
}

Polynomial initial_form(const Polynomial& p, std::span<const Rational> base) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "initial form of the zero polynomial");
  if (p.evaluate_exact(base) != 0) {
    throw Error(ErrorKind::BasePointNotOnVariety, "polynomial does not vanish at the base point");
  }
  const Polynomial moved = p.translate(base);
  return moved.homogeneous_part(static_cast<unsigned>(moved.min_degree()));
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::DomainViolation, "non-finite value has no rational form");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // 53-bit integer mantissa times a power of two.
  const auto m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  using boost::multiprecision::cpp_int;
  cpp_int num = m;
  cpp_int den = 1;
  if (exp >= 0) {
    num <<= exp;
  } else {
    den <<= -exp;
  }
  return Rational(num, den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace nashlab::poly
