#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nashlab/roots.hpp"
#include "nashlab/sampler.hpp"

using namespace nashlab;
using namespace nashlab::sampler;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

VarietySpec curve(const std::string& eq) { return VarietySpec::implicit_real(eq, {"x", "y"}); }

double relative_residual(const VarietySpec& s, const Vec& p) {
  const double pt[2] = {p[0], p[1]};
  const double scale = s.equation.abs_term_sum(pt);
  return scale == 0.0 ? 0.0 : std::fabs(s.equation.evaluate(std::span<const double>(pt))) / scale;
}

}  // namespace

TEST_CASE("real roots: simple, clustered and touching") {
  // (s - 1)(s + 2)(s - 0.5) = s^3 - 0.5 s^2... expanded by hand: s^3 + 0.5 s^2 - 2.5 s + 1
  auto r = roots::real_roots({1.0, -2.5, 0.5, 1.0}, -5, 5);
  REQUIRE(r.roots.size() == 3);
  CHECK(r.roots[0] == doctest::Approx(-2.0));
  CHECK(r.roots[1] == doctest::Approx(0.5));
  CHECK(r.roots[2] == doctest::Approx(1.0));
  CHECK_FALSE(r.degenerate);
  // s^4 - c with tiny c: roots +-c^(1/4) to full relative precision.
  const double c = 1e-60;
  r = roots::real_roots({-c, 0, 0, 0, 1}, -1, 1);
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[1] == doctest::Approx(1e-15).epsilon(1e-12));
  // (s - 0.3)^2 touches zero.
  r = roots::real_roots({0.09, -0.6, 1.0}, -1, 1);
  CHECK(r.degenerate);
  REQUIRE(r.roots.size() == 1);
  CHECK(r.roots[0] == doctest::Approx(0.3));
  // No roots.
  CHECK(roots::real_roots({1.0, 0.0, 1.0}, -10, 10).roots.empty());
}

TEST_CASE("complex roots of the companion matrix") {
  using c = std::complex<double>;
  const auto r = roots::complex_roots({c(1.0), c(0.0), c(1.0)});  // s^2 + 1
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - c(0, -1)) < 1e-14);
  CHECK(std::abs(r[1] - c(0, 1)) < 1e-14);
}

TEST_CASE("fiber_points worked cases") {
  const VarietySpec cusp = curve("x^2 = y^3");
  Fiber f = fiber_points(cusp, v2(0, 1), 0.04, 1.0);
  REQUIRE(f.points.size() == 2);
  // By hand: x = +-y^(3/2) = +-0.008.
  CHECK(std::min(f.points[0][0], f.points[1][0]) == doctest::Approx(-0.008));
  CHECK(std::max(f.points[0][0], f.points[1][0]) == doctest::Approx(0.008));
  CHECK(f.points[1][1] == doctest::Approx(0.04));
  CHECK(fiber_points(cusp, v2(0, 1), -0.1, 1.0).points.empty());

  const VarietySpec circle = curve("x^2 + y^2 - 1");
  f = fiber_points(circle, v2(1, 0), 0.0, 2.0);
  REQUIRE(f.points.size() == 2);
  CHECK(std::fabs(f.points[0][0]) < 1e-15);
  CHECK(std::fabs(std::fabs(f.points[0][1]) - 1.0) < 1e-15);
  CHECK(f.points[0][1] * f.points[1][1] < 0);

  try {
    fiber_points(VarietySpec::region("y^2 - x^3", {"x", "y"}), v2(1, 0), 0.1, 1.0);
    FAIL("expected UnsupportedSpec");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedSpec);
  }
  try {
    fiber_points(curve("x*(y - 1)"), v2(0, 1), 0.0, 2.0, v2(0, 1));
    FAIL("expected DegenerateFiber");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateFiber);
  }
}

TEST_CASE("fiber points satisfy the equation") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (const char* eq : {"x^2 = y^3", "y^2 - x^2*(x+1)", "x^4 - y^6", "x^2 + y^2 - 1", "y^2 - x^5"}) {
    const VarietySpec s = curve(eq);
    for (int i = 0; i < 50; ++i) {
      const double a = u(rng) * std::numbers::pi;
      for (const Vec& p : fiber_points(s, v2(std::cos(a), std::sin(a)), u(rng), 1.0).points) {
        CHECK(relative_residual(s, p) <= 1e-10);
      }
    }
  }
}

TEST_CASE("projection choice follows the tangent cone") {
  const auto cusp = choose_projection(curve("x^2 = y^3"), v2(0, 0));
  CHECK(cusp.direction[1] == 1.0);  // fibers y = const
  CHECK(cusp.cone.size() == 1);
  const auto x2 = choose_projection(curve("y^2 = x^5"), v2(0, 0));
  CHECK(x2.direction[0] == 1.0);  // fibers x = const
  const auto node = algebraic_cone(curve("y^2 - x^2*(x+1)"), v2(0, 0));
  CHECK(node.size() == 2);
}

TEST_CASE("multiplicity mod 2 worked cases") {
  const VarietySpec cusp = curve("x^2 = y^3");
  const auto cone = algebraic_cone(cusp, v2(0, 0));
  const auto rep = multiplicity_mod2(cusp, v2(0, 0), v2(0, 1), cone);
  CHECK(rep.parity == 0);
  CHECK(rep.dissent == 0);
  // Fibers over y > 0 carry two points, over y < 0 none.
  for (std::size_t k = 0; k < rep.values.size(); ++k) CHECK(rep.counts[k] == (rep.values[k] > 0 ? 2 : 0));

  const VarietySpec circle = curve("x^2 + y^2 - 1");
  CHECK(multiplicity_mod2(circle, v2(1, 0), v2(0, 1), algebraic_cone(circle, v2(1, 0))).parity == 1);

  const VarietySpec x2 = curve("y^2 = x^5");
  CHECK(multiplicity_mod2(x2, v2(0, 0), v2(1, 0), algebraic_cone(x2, v2(0, 0))).parity == 0);

  try {
    multiplicity_mod2(cusp, v2(0, 0), v2(1, 0), cone);
    FAIL("expected NonTransversalProjection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonTransversalProjection);
  }
}

TEST_CASE("property: parity is 1 at smooth circle points for every transversal direction") {
  const VarietySpec circle = curve("x^2 + y^2 - 1");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  for (int i = 0; i < 20; ++i) {
    const double phi = ang(rng);
    const Vec base = v2(std::cos(phi), std::sin(phi));
    const auto cone = algebraic_cone(circle, base);
    int tried = 0;
    while (tried < 20) {
      const double a = ang(rng);
      const Vec dir = v2(std::cos(a), std::sin(a));
      int parity = -1;
      try {
        parity = multiplicity_mod2(circle, base, dir, cone, static_cast<std::uint64_t>(i)).parity;
      } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::NonTransversalProjection);
        continue;
      }
      CHECK(parity == 1);
      ++tried;
    }
  }
}

TEST_CASE("sample_branches worked cases") {
  const ScaleLadder ladder = ScaleLadder::between(1e-1, 1e-4, 10);
  const auto cusp = sample_branches(curve("x^2 = y^3"), v2(0, 0), ladder);
  CHECK(branch_count(cusp) == 2);
  REQUIRE(cusp.size() == 2);
  for (const auto& b : cusp) {
    CHECK(b.side == 1);
    // One branch per sign of x, following (t^3, t^2).
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      CHECK(std::fabs(b.points[j][0]) == doctest::Approx(std::pow(b.points[j][1], 1.5)).epsilon(1e-10));
      CHECK(b.points[j][0] * b.points[0][0] > 0);
    }
  }
  const auto node = sample_branches(curve("y^2 - x^2*(x+1)"), v2(0, 0), ladder);
  CHECK(branch_count(node) == 2);
  CHECK(node.size() == 4);
  const auto circle = sample_branches(curve("x^2 + y^2 - 1"), v2(1, 0), ladder);
  CHECK(branch_count(circle) == 1);
}

TEST_CASE("property: Y_k has two branches per side and four fiber points in total") {
  for (int k = 1; k <= 3; ++k) {
    const VarietySpec y = curve("x^4 - y^" + std::to_string(4 * k + 2));
    const auto br = sample_branches(y, v2(0, 0), ScaleLadder::geometric());
    CHECK(branch_count(br) == 2);
    CHECK(br.size() == 4);
    for (const auto& b : br) {
      for (const auto& p : b.points) CHECK(relative_residual(y, p) <= 1e-10);
    }
  }
}

TEST_CASE("graph and region branches") {
  const VarietySpec f = VarietySpec::parametric({GraphFunction("x^3*exp(-1/x)", 0, 1),
                                                 GraphFunction("-x^3*exp(-1/x)", 0, 1), GraphFunction("0", -1, 0)});
  const auto br = sample_branches(f, v2(0, 0), ScaleLadder::geometric());
  CHECK(br.size() == 3);
  CHECK(branch_count(br) == 2);
  const Fiber fib = fiber_points(f, v2(1, 0), 0.5, 1.0);
  CHECK(fib.points.size() == 2);

  const VarietySpec z = VarietySpec::region("y^2 - x^3", {"x", "y"});
  const auto rays = sample_branches(z, v2(0, 0), ScaleLadder::geometric());
  REQUIRE(rays.size() == 1);
  CHECK(rays[0].points.back()[1] == 0.0);
  CHECK(sample_branches(z, v2(1, 0), ScaleLadder::geometric()).size() == 64);
}

TEST_CASE("complex branches") {
  const VarietySpec cusp = VarietySpec::implicit_complex("x^2 = y^3");
  const Vec origin = Vec::Zero(4);
  const auto br = sample_branches(cusp, origin, ScaleLadder::geometric());
  CHECK(branch_count(br) == 2);
  CHECK(br.size() == 16);
  for (const auto& b : br) {
    for (const auto& p : b.points) {
      const double pt[4] = {p[0], p[1], p[2], p[3]};
      CHECK(cusp.contains(pt, 1e-10));
    }
  }
  const VarietySpec line = VarietySpec::implicit_complex("x + y");
  CHECK(branch_count(sample_branches(line, origin, ScaleLadder::geometric())) == 1);
}
