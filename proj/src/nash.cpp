#include "nashlab/nash.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace nashlab::nash {

namespace {

using cplx = std::complex<double>;

constexpr double kSingularGradient = 1e-9;

Vec vec2(double a, double b) { return (Vec(2) << a, b).finished(); }

std::span<const double> as_span(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Subspace realify(cplx v0, cplx v1) {
  const Vec re = (Vec(4) << v0.real(), v1.real(), v0.imag(), v1.imag()).finished();
  const Vec im = (Vec(4) << -v0.imag(), -v1.imag(), v0.real(), v1.real()).finished();
  return Subspace::from_spanning({re, im});
}

void check_dim(const VarietySpec& spec, const Vec& point) {
  if (static_cast<std::size_t>(point.size()) != spec.ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from the ambient dimension");
  }
}

bool on_graph(const GraphFunction& g, const Vec& point) {
  if (!g.contains(point[0])) return false;
  const double y = g.h.evaluate(point[0]);
  return std::fabs(y - point[1]) <= 1e-9 * std::max(1.0, std::fabs(y));
}

// Orthogonal complement of a nonzero vector.
Subspace complement(const Vec& normal) {
  const Eigen::JacobiSVD<gr::Mat> svd(normal.transpose(), Eigen::ComputeFullV);
  return Subspace::from_columns(svd.matrixV().rightCols(normal.size() - 1));
}

Subspace implicit_tangent(const VarietySpec& spec, const Vec& point, bool check) {
  const auto pt = as_span(point);
  if (check && !spec.contains(pt)) throw Error(ErrorKind::NotOnVariety, "point is not on the variety");
  if (spec.relative_gradient(pt) <= kSingularGradient) {
    throw Error(ErrorKind::SingularPoint, "gradient vanishes at the point");
  }
  if (spec.kind == VarietyKind::ImplicitComplex) {
    const cplx z[2] = {{point[0], point[2]}, {point[1], point[3]}};
    const std::span<const cplx> zs(z, 2);
    const cplx fx = spec.grad[0].evaluate(zs);
    const cplx fy = spec.grad[1].evaluate(zs);
    return realify(-fy, fx);
  }
  Vec g(static_cast<Eigen::Index>(spec.ambient_dim));
  for (std::size_t i = 0; i < spec.ambient_dim; ++i) g[static_cast<Eigen::Index>(i)] = spec.grad[i].evaluate(pt);
  return complement(g);
}

Vec aligned(const Vec& v, const Vec& ref) { return v.dot(ref) < 0 ? Vec(-v) : v; }

// Extrapolated limits of a sequence from the windows ending one before the
// last and at the last term.
std::pair<Vec, Vec> two_limits(const std::vector<Vec>& seq) {
  const std::size_t n = seq.size();
  if (n >= 4) {
    return {extrapolate(seq[n - 4], seq[n - 3], seq[n - 2]), extrapolate(seq[n - 3], seq[n - 2], seq[n - 1])};
  }
  if (n == 3) {
    const Vec e = extrapolate(seq[0], seq[1], seq[2]);
    return {e, e};
  }
  return {seq.back(), seq.back()};
}

double ray_angle(const Vec& a, const Vec& b) {
  // Angle between unit vectors; accurate when they are nearly parallel.
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

std::vector<Branch> branches_for(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                 std::uint64_t seed) {
  check_dim(spec, base);
  return sampler::sample_branches(spec, base, ladder, seed);
}

}  // namespace

Subspace graph_tangent(const GraphFunction& g, double x) {
  const double slope = g.dh.evaluate(x);
  if (!std::isfinite(slope)) throw Error(ErrorKind::SingularPoint, "graph slope is not finite");
  return Subspace::from_spanning({vec2(1.0, slope)});
}

bool is_regular(const VarietySpec& spec, const Vec& point) {
  check_dim(spec, point);
  const auto pt = as_span(point);
  switch (spec.kind) {
    case VarietyKind::ImplicitReal:
    case VarietyKind::ImplicitComplex:
      if (!spec.contains(pt)) throw Error(ErrorKind::NotOnVariety, "point is not on the variety");
      return spec.relative_gradient(pt) > kSingularGradient;
    case VarietyKind::ParametricGraphs: {
      int hits = 0;
      bool interior = true;
      for (const auto& g : spec.graphs) {
        if (!on_graph(g, point)) continue;
        ++hits;
        interior = interior && point[0] > g.lo && point[0] < g.hi;
      }
      if (hits == 0) throw Error(ErrorKind::NotOnVariety, "point lies on none of the graphs");
      return hits == 1 && interior;
    }
    case VarietyKind::Region:
      if (!(spec.equation.evaluate(pt) <= 1e-12 * std::max(1.0, spec.equation.abs_term_sum(pt)))) {
        throw Error(ErrorKind::NotOnVariety, "point is outside the region");
      }
      return true;
  }
  return false;
}

Subspace tangent_space(const VarietySpec& spec, const Vec& point) {
  check_dim(spec, point);
  switch (spec.kind) {
    case VarietyKind::ImplicitReal:
    case VarietyKind::ImplicitComplex:
      return implicit_tangent(spec, point, true);
    case VarietyKind::ParametricGraphs: {
      if (!is_regular(spec, point)) {
        throw Error(ErrorKind::SingularPoint, "point is a junction or an endpoint of the graphs");
      }
      for (const auto& g : spec.graphs) {
        if (on_graph(g, point)) return graph_tangent(g, point[0]);
      }
      break;
    }
    case VarietyKind::Region:
      is_regular(spec, point);
      return Subspace::full(spec.ambient_dim);
  }
  throw Error(ErrorKind::NotOnVariety, "point is not on the variety");
}

std::vector<Subspace> branch_tangents(const VarietySpec& spec, const Branch& branch) {
  std::vector<Subspace> out;
  out.reserve(branch.points.size());
  for (std::size_t j = 0; j < branch.points.size(); ++j) {
    switch (spec.kind) {
      case VarietyKind::ImplicitReal:
      case VarietyKind::ImplicitComplex:
        out.push_back(implicit_tangent(spec, branch.points[j], false));
        break;
      case VarietyKind::ParametricGraphs:
        out.push_back(graph_tangent(spec.graphs.at(static_cast<std::size_t>(branch.graph)), branch.params[j]));
        break;
      case VarietyKind::Region:
        out.push_back(Subspace::full(spec.ambient_dim));
        break;
    }
  }
  return out;
}

Vec extrapolate(const Vec& a, const Vec& b, const Vec& c) {
  const Vec d1 = b - a;
  const Vec d2 = c - b;
  const double n1 = d1.squaredNorm();
  if (n1 <= 1e-30 * std::max(1.0, c.squaredNorm())) return c;
  const double r = d2.dot(d1) / n1;
  if (!(r > 0.0 && r < 1.0)) return c;
  return c + d2 * (r / (1.0 - r));
}

BranchLimit tangent_limit(const VarietySpec& spec, const Branch& branch, const ConeTolerances& tol) {
  if (branch.points.empty()) throw Error(ErrorKind::InsufficientScales, "branch has no points");
  const std::vector<Subspace> tangents = branch_tangents(spec, branch);
  const std::size_t n = spec.ambient_dim;
  const std::size_t d = tangents.front().d();
  std::vector<Vec> omega;
  for (const auto& t : tangents) {
    Vec w = gr::pluecker(t).coords;
    if (!omega.empty()) w = aligned(w, omega.back());
    omega.push_back(std::move(w));
  }
  const auto [e1, e2] = two_limits(omega);
  BranchLimit out{gr::from_pluecker(e2.normalized(), n, d), 0.0};
  out.variation = gr::delta(gr::from_pluecker(e1.normalized(), n, d), out.limit);
  if (out.variation > tol.stability) {
    throw Error(ErrorKind::SingularPoint,
                "tangent limits do not stabilize over the last rungs (variation " + std::to_string(out.variation) +
                    ")");
  }
  return out;
}

C4Result compute_C4(const VarietySpec& spec, const Vec& base, const std::vector<Branch>& branches,
                    const ConeTolerances& tol) {
  check_dim(spec, base);
  if (branches.empty()) throw Error(ErrorKind::NotOnVariety, "no branches through the point");
  C4Result out;
  for (const auto& b : branches) {
    out.branch_limits.push_back(tangent_limit(spec, b, tol));
    const Subspace& lim = out.branch_limits.back().limit;
    const bool known = std::any_of(out.spaces.begin(), out.spaces.end(),
                                   [&](const Subspace& s) { return gr::delta(s, lim) < tol.c4_delta; });
    if (!known) out.spaces.push_back(lim);
  }
  return out;
}

std::vector<Subspace> compute_C4(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                 std::uint64_t seed) {
  return compute_C4(spec, base, branches_for(spec, base, ladder, seed)).spaces;
}

C3Result compute_C3(const VarietySpec& spec, const Vec& base, const std::vector<Branch>& branches,
                    const ConeTolerances& tol) {
  check_dim(spec, base);
  if (branches.empty()) throw Error(ErrorKind::NotOnVariety, "no branches through the point");
  C3Result out;
  for (const auto& b : branches) {
    std::vector<Vec> secants;
    for (const auto& p : b.points) {
      const Vec s = p - base;
      if (s.norm() == 0.0) continue;
      secants.push_back(s.normalized());
    }
    if (secants.empty()) continue;
    const Vec ray = two_limits(secants).second.normalized();
    const bool known = std::any_of(out.rays.begin(), out.rays.end(),
                                   [&](const Vec& r) { return ray_angle(r, ray) < tol.c3_angle; });
    if (!known) out.rays.push_back(ray);
  }
  if (out.rays.empty()) throw Error(ErrorKind::NotOnVariety, "no secants at the point");

  for (const auto& r : out.rays) {
    const bool closed = std::any_of(out.rays.begin(), out.rays.end(),
                                    [&](const Vec& s) { return ray_angle(s, -r) < tol.c3_angle; });
    if (!closed) return out;
  }
  gr::Mat m(static_cast<Eigen::Index>(spec.ambient_dim), static_cast<Eigen::Index>(out.rays.size()));
  for (std::size_t k = 0; k < out.rays.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = out.rays[k];
  const Eigen::JacobiSVD<gr::Mat> svd(m, Eigen::ComputeFullU);
  const auto d = static_cast<Eigen::Index>(spec.set_dim);
  if (svd.singularValues().size() < d) return out;
  const Subspace span = Subspace::from_columns(svd.matrixU().leftCols(d));
  for (const auto& r : out.rays) {
    const Vec proj = span.frame() * (span.frame().transpose() * r);
    if (ray_angle(proj.normalized(), r) >= tol.c3_angle || proj.norm() == 0.0) return out;
  }
  // A rank-deficient ray set would fit in the span without filling it.
  if (svd.singularValues()[d - 1] < 0.1 * svd.singularValues()[0]) return out;
  out.is_linear = true;
  out.span = span;
  return out;
}

C3Result compute_C3(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder, std::uint64_t seed) {
  return compute_C3(spec, base, branches_for(spec, base, ladder, seed));
}

gr::NashPoint nash_lift(const VarietySpec& spec, const Vec& point, const ScaleLadder& ladder, std::uint64_t seed) {
  if (is_regular(spec, point)) return {point, tangent_space(spec, point)};
  const C4Result c4 = compute_C4(spec, point, branches_for(spec, point, ladder, seed));
  if (c4.spaces.size() >= 2) {
    throw Error(ErrorKind::NotInjective,
                std::to_string(c4.spaces.size()) + " distinct limit tangents over the point");
  }
  return {point, c4.spaces.front()};
}

TangentConeReport coincide_linearly(const VarietySpec& spec, const Vec& base, const std::vector<Branch>& branches,
                                    const ConeTolerances& tol) {
  TangentConeReport rep;
  rep.base = base;
  rep.branch_count = sampler::branch_count(branches);
  const C3Result c3 = compute_C3(spec, base, branches, tol);
  rep.c3_rays = c3.rays;
  rep.c3_is_linear = c3.is_linear;
  rep.c3_span = c3.span;
  rep.c4_spaces = compute_C4(spec, base, branches, tol).spaces;
  if (rep.c4_spaces.size() == 1) {
    rep.coincide_linearly = c3.is_linear && gr::delta(*c3.span, rep.c4_spaces.front()) < tol.coincide_delta;
  } else {
    rep.coincide_linearly = true;
  }
  if (spec.is_implicit()) {
    try {
      rep.algebraic_cone = sampler::algebraic_cone(spec, base);
    } catch (const Error&) {
      // The algebraic cone is informative only.
    }
  }
  return rep;
}

TangentConeReport coincide_linearly(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                    std::uint64_t seed) {
  return coincide_linearly(spec, base, branches_for(spec, base, ladder, seed));
}

}  // namespace nashlab::nash
