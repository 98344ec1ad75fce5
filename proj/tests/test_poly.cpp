#include <cmath>
#include <random>

#include "doctest.h"
#include "nashlab/expr.hpp"
#include "nashlab/poly_parser.hpp"
#include "nashlab/polynomial.hpp"

using namespace nashlab;
using namespace nashlab::poly;

namespace {

const std::vector<std::string> XY{"x", "y"};

Exponent ex(unsigned a, unsigned b) { return {a, b}; }

double eval2(const Polynomial& p, double x, double y) {
  const double pt[2] = {x, y};
  return evaluate(p, pt);
}

// Random polynomial in two variables with integer-over-small-denominator coefficients.
Polynomial random_poly(std::mt19937_64& rng, unsigned max_deg) {
  std::uniform_int_distribution<int> coef(-10, 10);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  std::uniform_int_distribution<int> nterms(1, 6);
  TermMap t;
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    const unsigned a = deg(rng);
    const unsigned b = std::uniform_int_distribution<unsigned>(0, max_deg - a)(rng);
    t[ex(a, b)] += Rational(coef(rng), den(rng));
  }
  return Polynomial(2, t);
}

}  // namespace

TEST_CASE("parse: cusp and Y_1 transcribe directly") {
  const Polynomial p = parse_polynomial("x^2 - y^3", XY);
  CHECK(p.terms().size() == 2);
  CHECK(p.coefficient(ex(2, 0)) == 1);
  CHECK(p.coefficient(ex(0, 3)) == -1);

  const Polynomial q = parse_polynomial("x^4 - y^6", XY);
  CHECK(q.terms().size() == 2);
  CHECK(q.coefficient(ex(4, 0)) == 1);
  CHECK(q.coefficient(ex(0, 6)) == -1);
}

TEST_CASE("parse: node expands to three terms") {
  const Polynomial p = parse_polynomial("y^2 - x^2*(x+1)", XY);
  // Hand expansion: y^2 - x^3 - x^2.
  CHECK(p.terms().size() == 3);
  CHECK(p.coefficient(ex(0, 2)) == 1);
  CHECK(p.coefficient(ex(3, 0)) == -1);
  CHECK(p.coefficient(ex(2, 0)) == -1);
  // Pointwise oracle on the unexpanded formula.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(eval2(p, x, y) == doctest::Approx(y * y - x * x * (x + 1)).epsilon(1e-13));
  }
}

TEST_CASE("parse: rationals, decimals and equations") {
  const Polynomial p = parse_polynomial("3/2*x^2*y + 0.25", XY);
  CHECK(p.coefficient(ex(2, 1)) == Rational(3, 2));
  CHECK(p.coefficient(ex(0, 0)) == Rational(1, 4));
  const Polynomial e = parse_equation("x^2 = y^3", XY);
  CHECK(e == parse_polynomial("x^2 - y^3", XY));
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse_polynomial("x^2 - ", XY), SyntaxError);
  CHECK_THROWS_AS(parse_polynomial("2x", XY), SyntaxError);
  CHECK_THROWS_AS(parse_polynomial("x^-1", XY), SyntaxError);
  CHECK_THROWS_AS(parse_polynomial("(x + y", XY), SyntaxError);
  try {
    parse_polynomial("x + z", XY);
    FAIL("expected UnknownVariable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownVariable);
  }
  try {
    parse_polynomial("x * * y", XY);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("print: canonical graded-lex form") {
  CHECK(to_string(parse_polynomial("x^2 - y^3", XY), XY) == "-y^3 + x^2");
  CHECK(to_string(parse_polynomial("y*x*3/2*x", XY), XY) == "3/2*x^2*y");
  CHECK(to_string(parse_polynomial("x - x", XY), XY) == "0");
}

TEST_CASE("property: parse(print(p)) == p") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const Polynomial p = random_poly(rng, 8);
    CHECK(parse_polynomial(to_string(p, XY), XY) == p);
  }
}

TEST_CASE("evaluate: cusp values") {
  const Polynomial p = parse_polynomial("x^2 - y^3", XY);
  CHECK(eval2(p, 1, 1) == 0.0);
  CHECK(eval2(p, 0, 0) == 0.0);
  CHECK(eval2(p, 2, 1) == 3.0);
  const double bad[3] = {1, 2, 3};
  try {
    evaluate(p, bad);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("property: evaluation bound") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const Polynomial p = random_poly(rng, 8);
    const double x = u(rng), y = u(rng);
    double coef_sum = 0;
    for (const auto& [e, c] : p.terms()) coef_sum += std::fabs(to_double(c));
    const double bound = coef_sum * std::pow(std::max({1.0, std::fabs(x), std::fabs(y)}), p.degree());
    CHECK(std::fabs(eval2(p, x, y)) <= bound * (1 + 1e-12));
  }
}

TEST_CASE("gradient: formal derivatives") {
  const auto g = gradient(parse_polynomial("x^2 - y^3", XY));
  CHECK(g[0] == parse_polynomial("2*x", XY));
  CHECK(g[1] == parse_polynomial("-3*y^2", XY));
  const auto h = gradient(parse_polynomial("x^2 + y^2 - 1", XY));
  CHECK(h[0] == parse_polynomial("2*x", XY));
  CHECK(h[1] == parse_polynomial("2*y", XY));
  const auto c = gradient(parse_polynomial("7/3", XY));
  CHECK(c[0].is_zero());
  CHECK(c[1].is_zero());
}

TEST_CASE("property: gradient is linear") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const Polynomial p = random_poly(rng, 6);
    const Polynomial q = random_poly(rng, 6);
    const Rational a(3, 7), b(-5, 2);
    const auto lhs = gradient(a * p + b * q);
    const auto gp = gradient(p);
    const auto gq = gradient(q);
    for (std::size_t k = 0; k < 2; ++k) CHECK(lhs[k] == a * gp[k] + b * gq[k]);
  }
}

TEST_CASE("property: gradient matches central finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  const double h = 1e-5;
  int checked = 0;
  while (checked < 100) {
    // Integer coefficients in [-10, 10], degree <= 8.
    TermMap t;
    std::uniform_int_distribution<int> coef(-10, 10);
    for (int k = 0; k < 5; ++k) {
      const unsigned a = std::uniform_int_distribution<unsigned>(0, 8)(rng);
      const unsigned b = std::uniform_int_distribution<unsigned>(0, 8 - a)(rng);
      t[ex(a, b)] += coef(rng);
    }
    const Polynomial p(2, t);
    const auto g = gradient(p);
    const double x = u(rng), y = u(rng);
    const double th = u(rng) * M_PI;
    const double dx = std::cos(th), dy = std::sin(th);
    const double analytic = eval2(g[0], x, y) * dx + eval2(g[1], x, y) * dy;
    const double fd = (eval2(p, x + h * dx, y + h * dy) - eval2(p, x - h * dx, y - h * dy)) / (2 * h);
    const double pt[2] = {x, y};
    const double scale = std::max(1.0, p.abs_term_sum(pt));
    if (std::fabs(analytic) < 1e-3 * scale) continue;  // relative check needs a nonvanishing derivative
    CHECK(std::fabs(fd - analytic) <= 1e-6 * std::fabs(analytic) + 1e-8 * scale);
    ++checked;
  }
}

TEST_CASE("initial_form: worked cases") {
  const Rational origin[2] = {0, 0};
  CHECK(initial_form(parse_polynomial("x^2 - y^3", XY), origin) == parse_polynomial("x^2", XY));
  const Rational east[2] = {1, 0};
  // In the translated coordinates u = x - 1 the lowest part is 2u.
  CHECK(initial_form(parse_polynomial("x^2 + y^2 - 1", XY), east) == parse_polynomial("2*x", XY));
  const Polynomial h = parse_polynomial("x^3 - 2*x*y^2 + y^3", XY);
  CHECK(initial_form(h, origin) == h);

  try {
    initial_form(parse_polynomial("x^2 - y^3", XY), east);
    FAIL("expected BasePointNotOnVariety");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BasePointNotOnVariety);
  }
  try {
    initial_form(Polynomial(2), origin);
    FAIL("expected ZeroPolynomial");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroPolynomial);
  }
}

TEST_CASE("property: initial form is the leading term of p(b + s v) as s -> 0") {
  // Independent oracle: degree scan of the restriction to random lines.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  const Rational base[2] = {Rational(1, 2), Rational(-1, 4)};
  for (int i = 0; i < 40; ++i) {
    Polynomial p = random_poly(rng, 6);
    const Rational v = p.evaluate_exact(base);
    p = p - Polynomial::constant(2, v);
    if (p.is_zero()) continue;
    const Polynomial in = initial_form(p, base);
    CHECK(in.is_homogeneous());
    const int m = in.degree();
    const double vx = u(rng), vy = u(rng);
    const double s = 1e-4;
    const double lhs = eval2(p, 0.5 + s * vx, -0.25 + s * vy) / std::pow(s, m);
    const double rhs = eval2(in, vx, vy);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-2).scale(1.0));
  }
}

TEST_CASE("to_rational is exact") {
  for (double x : {0.1, -3.75, 1e-300, 123456.789}) CHECK(to_double(to_rational(x)) == x);
  CHECK(to_rational(0.5) == Rational(1, 2));
}

TEST_CASE("expr: parse, evaluate and differentiate") {
  const Expr f = Expr::parse("x^3*exp(-1/x)");
  CHECK(f.evaluate(0.5) == doctest::Approx(0.125 * std::exp(-2.0)));
  const Expr df = f.derivative();
  for (double x : {0.05, 0.2, 0.7, 1.3}) {
    const double h = 1e-6 * x;
    const double fd = (f.evaluate(x + h) - f.evaluate(x - h)) / (2 * h);
    CHECK(df.evaluate(x) == doctest::Approx(fd).epsilon(1e-6));
    // Closed form: (3x^2 + x) e^{-1/x}.
    CHECK(df.evaluate(x) == doctest::Approx((3 * x * x + x) * std::exp(-1 / x)).epsilon(1e-12));
  }
  const Expr g = Expr::parse("x^(5/2) + sqrt(x) - log(x)");
  CHECK(g.evaluate(4.0) == doctest::Approx(32.0 + 2.0 - std::log(4.0)));
  CHECK(g.derivative().evaluate(4.0) == doctest::Approx(2.5 * 8.0 + 0.25 - 0.25));
  CHECK(Expr::parse("2*3").is_constant());
  CHECK_THROWS_AS(Expr::parse("x^"), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("sin(x)"), Error);
}

TEST_CASE("expr: extended range agrees with double and survives underflow") {
  const Expr f = Expr::parse("x^3*exp(-1/x^2)");
  for (double x : {0.3, 0.1, 0.05}) {
    CHECK(f.evaluate(ExtReal(x)).to_double() == doctest::Approx(f.evaluate(x)).epsilon(1e-12));
  }
  const double x = 1e-3;
  const ExtReal v = f.evaluate(ExtReal(x));
  CHECK(f.evaluate(x) == 0.0);
  CHECK(v.log_abs() == doctest::Approx(3 * std::log(x) - 1 / (x * x)).epsilon(1e-12));
  CHECK_THROWS_AS(Expr::parse("x^(1/2)").evaluate(-1.0), Error);
}
