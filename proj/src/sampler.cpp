#include "nashlab/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "nashlab/roots.hpp"

namespace nashlab::sampler {

namespace {

using cplx = std::complex<double>;

constexpr double kTransversal = 0.1;
constexpr double kMultiplicityWindow = 0.05;

Vec vec2(double a, double b) { return (Vec(2) << a, b).finished(); }

Vec perp(const Vec& d) { return vec2(-d[1], d[0]); }

void require_plane_curve(const VarietySpec& spec) {
  if (spec.kind != VarietyKind::ImplicitReal || spec.ambient_dim != 2) {
    throw Error(ErrorKind::UnsupportedSpec, "operation needs an implicit-real plane curve");
  }
}

std::vector<poly::Rational> exact(const Vec& v) {
  std::vector<poly::Rational> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(poly::to_rational(v[i]));
  return out;
}

// Coefficients of p(a + s u), ascending in s.
template <typename T>
std::vector<T> restrict_to_line(const poly::Polynomial& p, const std::array<T, 2>& a, const std::array<double, 2>& u) {
  const int deg = std::max(0, p.degree());
  // powers[k][e] = coefficients of (a_k + s u_k)^e
  std::array<std::vector<std::vector<T>>, 2> powers;
  for (int k = 0; k < 2; ++k) {
    powers[k].push_back({T(1.0)});
    for (int e = 1; e <= deg; ++e) {
      const auto& prev = powers[k].back();
      std::vector<T> next(prev.size() + 1, T(0.0));
      for (std::size_t i = 0; i < prev.size(); ++i) {
        next[i] += prev[i] * a[k];
        next[i + 1] += prev[i] * u[k];
      }
      powers[k].push_back(std::move(next));
    }
  }
  std::vector<T> out(static_cast<std::size_t>(deg) + 1, T(0.0));
  for (const auto& [e, c] : p.terms()) {
    const double cd = poly::to_double(c);
    const auto& px = powers[0][e[0]];
    const auto& py = powers[1][e[1]];
    for (std::size_t i = 0; i < px.size(); ++i) {
      for (std::size_t j = 0; j < py.size(); ++j) out[i + j] += cd * px[i] * py[j];
    }
  }
  return out;
}

// Real lines {F = 0} of a binary form given by coefficients a_k of x^k y^(m-k).
std::vector<Vec> real_form_lines(const std::vector<double>& a) {
  std::vector<Vec> dirs;
  const std::size_t m = a.size() - 1;
  // Chart y = 1: F(r, 1) = sum a_k r^k.
  for (double r : roots::real_roots(a, -1.0, 1.0).roots) dirs.push_back(vec2(r, 1.0).normalized());
  // Chart x = 1: F(1, s) = sum a_k s^(m-k).
  std::vector<double> b(m + 1);
  for (std::size_t k = 0; k <= m; ++k) b[m - k] = a[k];
  for (double s : roots::real_roots(b, -1.0, 1.0).roots) dirs.push_back(vec2(1.0, s).normalized());
  return dirs;
}

std::vector<cplx> complex_form_roots(const std::vector<double>& a) {
  std::vector<cplx> c(a.begin(), a.end());
  bool all_zero = true;
  for (auto v : c) all_zero = all_zero && v == 0.0;
  if (all_zero) return {};
  return roots::complex_roots(c);
}

gr::Subspace realify(cplx v0, cplx v1) {
  const Vec re = (Vec(4) << v0.real(), v1.real(), v0.imag(), v1.imag()).finished();
  const Vec im = (Vec(4) << -v0.imag(), -v1.imag(), v0.real(), v1.real()).finished();
  return gr::Subspace::from_spanning({re, im});
}

std::vector<gr::Subspace> dedupe(const std::vector<gr::Subspace>& in) {
  std::vector<gr::Subspace> out;
  for (const auto& s : in) {
    bool seen = false;
    for (const auto& t : out) seen = seen || gr::delta(s, t) < 1e-9;
    if (!seen) out.push_back(s);
  }
  return out;
}

// Coefficients of the cone form as a binary form: a_k multiplies x^k y^(m-k).
std::vector<double> cone_form(const VarietySpec& spec, const Vec& base) {
  if (spec.kind == VarietyKind::ImplicitReal) {
    const std::vector<poly::Rational> b = exact(base);
    if (spec.equation.evaluate_exact(b) == 0) {
      const poly::Polynomial in = poly::initial_form(spec.equation, b);
      const auto m = static_cast<std::size_t>(in.degree());
      std::vector<double> a(m + 1, 0.0);
      for (const auto& [e, c] : in.terms()) a[e[0]] = poly::to_double(c);
      return a;
    }
    const double pt[2] = {base[0], base[1]};
    if (!spec.contains(pt)) throw Error(ErrorKind::BasePointNotOnVariety, "base point is not on the curve");
    if (spec.relative_gradient(pt) <= 1e-9) {
      throw Error(ErrorKind::BasePointNotOnVariety, "singular base point must lie exactly on the curve");
    }
    return {spec.grad[1].evaluate(std::span<const double>(pt)), spec.grad[0].evaluate(std::span<const double>(pt))};
  }
  // Complex: exact initial form needs a real base; regular complex bases use the gradient.
  const double pt4[4] = {base[0], base[1], base[2], base[3]};
  if (!spec.contains(pt4)) throw Error(ErrorKind::BasePointNotOnVariety, "base point is not on the curve");
  if (base[2] == 0.0 && base[3] == 0.0) {
    const poly::Rational b[2] = {poly::to_rational(base[0]), poly::to_rational(base[1])};
    if (spec.equation.evaluate_exact(b) == 0) {
      const poly::Polynomial in = poly::initial_form(spec.equation, b);
      const auto m = static_cast<std::size_t>(in.degree());
      std::vector<double> a(m + 1, 0.0);
      for (const auto& [e, c] : in.terms()) a[e[0]] = poly::to_double(c);
      return a;
    }
  }
  if (spec.relative_gradient(pt4) <= 1e-9) {
    throw Error(ErrorKind::UnsupportedSpec, "singular complex base points must be real");
  }
  return {};  // handled by the caller through the complex gradient
}

double min_delta(const gr::Subspace& line, const std::vector<gr::Subspace>& cone) {
  double best = std::sqrt(2.0);
  for (const auto& c : cone) best = std::min(best, gr::delta(line, c));
  return best;
}

gr::Subspace fiber_subspace(const VarietySpec& spec, const Vec& direction) {
  const Vec u = perp(direction);
  if (spec.kind == VarietyKind::ImplicitComplex) return realify(u[0], u[1]);
  return gr::Subspace::from_spanning({u});
}

double branch_window(double t, double transversality) {
  return std::min(0.5, 3.0 * t * std::max(1.0, 1.0 / std::max(transversality, 1e-3)));
}

// Pairs fiber points across rungs into half-branches by nearest normalized secant.
std::vector<Branch> pair_rungs(const std::vector<std::vector<Vec>>& rungs, const std::vector<double>& scales,
                               const Vec& base, int side) {
  const std::size_t count = rungs.front().size();
  for (const auto& r : rungs) {
    if (r.size() != count) {
      throw Error(ErrorKind::BranchPairingAmbiguous,
                  "fiber cardinality changes along the ladder on side " + std::to_string(side) +
                      "; densify or shrink the ladder");
    }
  }
  std::vector<Branch> out(count);
  for (std::size_t b = 0; b < count; ++b) {
    out[b].side = side;
    out[b].scales = {scales[0]};
    out[b].points = {rungs[0][b]};
  }
  auto secant = [&](const Vec& p) -> Vec {
    const Vec d = p - base;
    const double n = d.norm();
    return n > 0 ? Vec(d / n) : d;
  };
  for (std::size_t j = 1; j < rungs.size(); ++j) {
    std::vector<bool> used(count, false);
    for (auto& br : out) {
      const Vec prev = secant(br.points.back());
      double d1 = INFINITY, d2 = INFINITY;
      std::size_t best = 0;
      for (std::size_t c = 0; c < count; ++c) {
        const double d = (secant(rungs[j][c]) - prev).norm();
        if (d < d1) {
          d2 = d1;
          d1 = d;
          best = c;
        } else if (d < d2) {
          d2 = d;
        }
      }
      if (count > 1 && d2 <= 1.1 * d1) {
        throw Error(ErrorKind::BranchPairingAmbiguous,
                    "two continuations within 10% at scale " + std::to_string(scales[j]));
      }
      if (used[best]) throw Error(ErrorKind::BranchPairingAmbiguous, "two branches claim one continuation");
      used[best] = true;
      br.scales.push_back(scales[j]);
      br.points.push_back(rungs[j][best]);
    }
  }
  return out;
}

std::vector<Branch> implicit_real_branches(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                           std::uint64_t seed) {
  require_plane_curve(spec);
  const Projection proj = choose_projection(spec, base, seed);
  std::vector<Branch> out;
  for (int side : {1, -1}) {
    std::vector<std::vector<Vec>> rungs;
    for (double t : ladder.scales) {
      const Fiber f = fiber_points(spec, proj.direction, side * t, branch_window(t, proj.transversality), base);
      if (f.degenerate) {
        throw Error(ErrorKind::DegenerateFiber, "touching root on a branch fiber at scale " + std::to_string(t));
      }
      rungs.push_back(f.points);
    }
    if (rungs.front().empty() && std::all_of(rungs.begin(), rungs.end(), [](auto& r) { return r.empty(); })) {
      continue;
    }
    for (auto& b : pair_rungs(rungs, ladder.scales, base, side)) out.push_back(std::move(b));
  }
  return out;
}

std::vector<Branch> complex_branches(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                     std::uint64_t seed) {
  const Projection proj = choose_projection(spec, base, seed);
  std::vector<Branch> out;
  for (int k = 0; k < 8; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 8.0;
    std::vector<std::vector<Vec>> rungs;
    for (double t : ladder.scales) {
      rungs.push_back(complex_fiber_points(spec, proj.direction, std::polar(t, theta),
                                           branch_window(t, proj.transversality), base));
    }
    if (std::all_of(rungs.begin(), rungs.end(), [](auto& r) { return r.empty(); })) continue;
    for (auto& b : pair_rungs(rungs, ladder.scales, base, k)) out.push_back(std::move(b));
  }
  return out;
}

std::vector<Branch> graph_branches(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder) {
  std::vector<Branch> out;
  const double x0 = base[0];
  for (std::size_t g = 0; g < spec.graphs.size(); ++g) {
    const GraphFunction& fn = spec.graphs[g];
    if (!fn.contains(x0)) continue;
    const double y0 = fn.h.evaluate(x0);
    if (!(std::fabs(y0 - base[1]) <= 1e-9 * std::max(1.0, std::fabs(y0)))) continue;
    for (int side : {1, -1}) {
      if (!fn.contains(x0 + side * ladder.scales.front())) continue;
      Branch b;
      b.side = side;
      b.graph = static_cast<int>(g);
      for (double t : ladder.scales) {
        const double x = x0 + side * t;
        b.scales.push_back(t);
        b.params.push_back(x);
        b.points.push_back(vec2(x, fn.h.evaluate(x)));
      }
      out.push_back(std::move(b));
    }
  }
  if (out.empty()) throw Error(ErrorKind::NotOnVariety, "base point lies on none of the graphs");
  std::stable_sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) { return a.side > b.side; });
  return out;
}

std::vector<Branch> region_branches(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder) {
  if (spec.ambient_dim != 2) throw Error(ErrorKind::UnsupportedSpec, "region rays need a planar region");
  std::vector<Branch> out;
  for (int k = 0; k < 64; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / 64.0;
    const Vec dir = vec2(std::cos(phi), std::sin(phi));
    Branch b;
    b.side = k;
    bool inside = true;
    for (double t : ladder.scales) {
      const Vec p = base + t * dir;
      const double pt[2] = {p[0], p[1]};
      if (!(spec.equation.evaluate(std::span<const double>(pt)) <= 0.0)) {
        inside = false;
        break;
      }
      b.scales.push_back(t);
      b.points.push_back(p);
    }
    if (inside) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

ScaleLadder ScaleLadder::geometric(double top, double ratio, std::size_t count) {
  if (!(top > 0) || !(ratio > 0 && ratio < 1) || count == 0) {
    throw Error(ErrorKind::InputError, "ladder needs top > 0, 0 < ratio < 1 and at least one rung");
  }
  ScaleLadder l;
  for (std::size_t j = 0; j < count; ++j) l.scales.push_back(top * std::pow(ratio, static_cast<double>(j)));
  return l;
}

ScaleLadder ScaleLadder::between(double hi, double lo, std::size_t count) {
  if (!(hi > lo && lo > 0) || count < 2) throw Error(ErrorKind::InputError, "ladder needs hi > lo > 0 and 2 rungs");
  return geometric(hi, std::pow(lo / hi, 1.0 / static_cast<double>(count - 1)), count);
}

std::vector<gr::Subspace> algebraic_cone(const VarietySpec& spec, const Vec& base) {
  if (spec.kind == VarietyKind::ImplicitReal) {
    require_plane_curve(spec);
    std::vector<gr::Subspace> lines;
    for (const Vec& d : real_form_lines(cone_form(spec, base))) lines.push_back(gr::Subspace::from_spanning({d}));
    return dedupe(lines);
  }
  if (spec.kind == VarietyKind::ImplicitComplex) {
    const std::vector<double> a = cone_form(spec, base);
    std::vector<gr::Subspace> planes;
    if (a.empty()) {
      const std::complex<double> z[2] = {{base[0], base[2]}, {base[1], base[3]}};
      const cplx fx = spec.grad[0].evaluate<cplx>(z);
      const cplx fy = spec.grad[1].evaluate<cplx>(z);
      planes.push_back(realify(-fy, fx));
      return planes;
    }
    const std::size_t m = a.size() - 1;
    for (cplx r : complex_form_roots(a)) {
      if (std::abs(r) <= 1.0) planes.push_back(realify(r, 1.0));
    }
    std::vector<double> b(m + 1);
    for (std::size_t k = 0; k <= m; ++k) b[m - k] = a[k];
    for (cplx s : complex_form_roots(b)) {
      if (std::abs(s) <= 1.0) planes.push_back(realify(1.0, s));
    }
    return dedupe(planes);
  }
  throw Error(ErrorKind::UnsupportedSpec, "algebraic cone is defined for implicit plane curves");
}

Projection choose_projection(const VarietySpec& spec, const Vec& base, std::uint64_t seed) {
  Projection p;
  p.cone = algebraic_cone(spec, base);
  const Vec candidates[2] = {vec2(0.0, 1.0), vec2(1.0, 0.0)};
  for (const Vec& c : candidates) {
    const double tau = min_delta(fiber_subspace(spec, c), p.cone);
    if (tau > p.transversality + 1e-12) {
      p.transversality = tau;
      p.direction = c;
    }
  }
  if (p.transversality > kTransversal) return p;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double a = angle(rng);
    const Vec c = vec2(std::cos(a), std::sin(a));
    const double tau = min_delta(fiber_subspace(spec, c), p.cone);
    if (tau > kTransversal) {
      p.direction = c;
      p.transversality = tau;
      p.random = true;
      return p;
    }
  }
  throw Error(ErrorKind::NonTransversalProjection, "no transversal projection found");
}

Fiber fiber_points(const VarietySpec& spec, const Vec& direction, double value, double window) {
  return fiber_points(spec, direction, value, window, Vec::Zero(static_cast<Eigen::Index>(spec.ambient_dim)));
}

Fiber fiber_points(const VarietySpec& spec, const Vec& direction, double value, double window, const Vec& center) {
  if (!(std::fabs(value) < window)) throw Error(ErrorKind::InputError, "fiber offset must be inside the window");
  Fiber fiber;
  fiber.direction = direction.normalized();
  fiber.value = value;
  const Vec d = fiber.direction;
  const Vec u = perp(d);

  if (spec.kind == VarietyKind::ParametricGraphs) {
    if (std::fabs(std::fabs(d[0]) - 1.0) > 1e-15) {
      throw Error(ErrorKind::UnsupportedSpec, "graph fibers are vertical lines (projection onto x)");
    }
    const double x = center[0] + value * d[0];
    for (const auto& g : spec.graphs) {
      if (!g.contains(x)) continue;
      const Vec p = vec2(x, g.h.evaluate(x));
      if ((p - center).norm() > window) continue;
      bool dup = false;
      for (const auto& q : fiber.points) dup = dup || (p - q).norm() <= 1e-12;
      if (dup) {
        fiber.degenerate = true;
      } else {
        fiber.points.push_back(p);
      }
    }
    std::sort(fiber.points.begin(), fiber.points.end(), [&](const Vec& a, const Vec& b) { return a.dot(u) < b.dot(u); });
    return fiber;
  }
  require_plane_curve(spec);

  const bool at_origin = center.isZero(0.0);
  const poly::Polynomial f = at_origin ? spec.equation : spec.equation.translate(exact(center));
  const std::array<double, 2> a{value * d[0], value * d[1]};
  const std::vector<double> coeffs = restrict_to_line<double>(f, a, {u[0], u[1]});
  if (std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; })) {
    throw Error(ErrorKind::DegenerateFiber, "the curve contains the fiber line");
  }
  const double reach = std::sqrt(window * window - value * value);
  const roots::RealRoots rr = roots::real_roots(coeffs, -reach, reach);
  fiber.degenerate = rr.degenerate;
  for (double s : rr.roots) fiber.points.push_back(center + value * d + s * u);
  return fiber;
}

std::vector<Vec> complex_fiber_points(const VarietySpec& spec, const Vec& direction, std::complex<double> w,
                                      double window, const Vec& center) {
  if (spec.kind != VarietyKind::ImplicitComplex) {
    throw Error(ErrorKind::UnsupportedSpec, "complex fibers need an implicit-complex spec");
  }
  const Vec d = direction.normalized();
  const Vec u = perp(d);
  const bool real_center = center[2] == 0.0 && center[3] == 0.0;
  poly::Polynomial f = spec.equation;
  std::array<cplx, 2> a{w * d[0], w * d[1]};
  if (real_center) {
    if (center[0] != 0.0 || center[1] != 0.0) {
      const poly::Rational b[2] = {poly::to_rational(center[0]), poly::to_rational(center[1])};
      f = f.translate(b);
    }
  } else {
    a[0] += cplx(center[0], center[2]);
    a[1] += cplx(center[1], center[3]);
  }
  const std::vector<cplx> coeffs = restrict_to_line<cplx>(f, a, {u[0], u[1]});
  if (std::all_of(coeffs.begin(), coeffs.end(), [](cplx c) { return c == 0.0; })) {
    throw Error(ErrorKind::DegenerateFiber, "the curve contains the fiber line");
  }
  std::vector<Vec> out;
  for (cplx s : roots::complex_roots(coeffs)) {
    // Offset from the center in C^2, then realified.
    const cplx zx = w * d[0] + s * u[0];
    const cplx zy = w * d[1] + s * u[1];
    const Vec off = (Vec(4) << zx.real(), zy.real(), zx.imag(), zy.imag()).finished();
    if (off.norm() <= window) out.push_back(center + off);
  }
  return out;
}

ParityReport multiplicity_mod2(const VarietySpec& spec, const Vec& base, const Vec& direction,
                               const std::vector<gr::Subspace>& cone_lines, std::uint64_t seed) {
  require_plane_curve(spec);
  const double pt[2] = {base[0], base[1]};
  if (!spec.contains(pt)) throw Error(ErrorKind::NotOnVariety, "base point is not on the curve");
  const Vec d = direction.normalized();
  const double tau = min_delta(fiber_subspace(spec, d), cone_lines);
  if (!(tau > kTransversal)) {
    throw Error(ErrorKind::NonTransversalProjection,
                "fiber line within delta " + std::to_string(tau) + " of a cone line");
  }
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  ParityReport rep;
  int odd = 0;
  for (int j = 2; j <= 5; ++j) {
    for (int sign : {1, -1}) {
      Fiber f;
      double t = 0.0;
      int tries = 0;
      do {
        t = sign * 1e-2 * std::ldexp(1.0, -j) * jitter(rng);
        f = fiber_points(spec, d, t, kMultiplicityWindow, base);
      } while (f.degenerate && ++tries < 10);
      if (f.degenerate) throw Error(ErrorKind::DegenerateFiber, "no generic fiber found after resampling");
      rep.values.push_back(t);
      rep.counts.push_back(static_cast<int>(f.points.size()));
      odd += static_cast<int>(f.points.size() % 2);
    }
  }
  const int n = static_cast<int>(rep.counts.size());
  rep.parity = odd * 2 > n ? 1 : 0;
  rep.dissent = rep.parity == 1 ? n - odd : odd;
  if (rep.dissent > 1) {
    throw Error(ErrorKind::InconsistentParity,
                std::to_string(rep.dissent) + " of " + std::to_string(n) + " fibers disagree on parity");
  }
  return rep;
}

std::vector<Branch> sample_branches(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                    std::uint64_t seed) {
  if (static_cast<std::size_t>(base.size()) != spec.ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "base point dimension differs from the ambient dimension");
  }
  if (ladder.scales.empty()) throw Error(ErrorKind::InsufficientScales, "empty ladder");
  switch (spec.kind) {
    case VarietyKind::ImplicitReal: return implicit_real_branches(spec, base, ladder, seed);
    case VarietyKind::ImplicitComplex: return complex_branches(spec, base, ladder, seed);
    case VarietyKind::ParametricGraphs: return graph_branches(spec, base, ladder);
    case VarietyKind::Region: return region_branches(spec, base, ladder);
  }
  return {};
}

std::size_t branch_count(const std::vector<Branch>& branches) {
  std::map<int, std::size_t> per_side;
  for (const auto& b : branches) ++per_side[b.side];
  std::size_t best = 0;
  for (const auto& [side, n] : per_side) best = std::max(best, n);
  return best;
}

}  // namespace nashlab::sampler
