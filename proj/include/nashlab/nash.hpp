#pragma once

#include <optional>
#include <vector>

#include "nashlab/grassmannian.hpp"
#include "nashlab/sampler.hpp"
#include "nashlab/variety.hpp"

namespace nashlab::nash {

using gr::Subspace;
using gr::Vec;
using sampler::Branch;
using sampler::ScaleLadder;

struct ConeTolerances {
  double c4_delta = 0.05;      // clustering of limit tangents, in delta
  double c3_angle = 1e-2;      // clustering of secant rays, in radians
  double stability = 1e-3;     // allowed change between the last two extrapolations
  double coincide_delta = 0.05;
};

// nu(x) = T_x X at a regular point.
Subspace tangent_space(const VarietySpec& spec, const Vec& point);

// Tangent line of a graph at abscissa x.
Subspace graph_tangent(const GraphFunction& g, double x);

// Tangent of the set at each rung of a branch.
std::vector<Subspace> branch_tangents(const VarietySpec& spec, const Branch& branch);

// True when tangent_space can be applied at the point directly.
bool is_regular(const VarietySpec& spec, const Vec& point);

// Limit of a vector sequence by geometric extrapolation of its last three
// terms, x + dx * r / (1 - r) with r the ratio of successive differences.
// Falls back to the last term when the differences do not contract.
Vec extrapolate(const Vec& a, const Vec& b, const Vec& c);

struct BranchLimit {
  Subspace limit;
  double variation = 0.0;  // delta between the extrapolations from the last two windows
};

// Limit tangent of one branch from the last 4 rungs (sign-aligned Pluecker vectors).
BranchLimit tangent_limit(const VarietySpec& spec, const Branch& branch, const ConeTolerances& tol = {});

struct C4Result {
  std::vector<Subspace> spaces;            // clustered limits
  std::vector<BranchLimit> branch_limits;  // one per branch
};

struct C3Result {
  std::vector<Vec> rays;
  bool is_linear = false;
  std::optional<Subspace> span;  // set when is_linear
};

C4Result compute_C4(const VarietySpec& spec, const Vec& base, const std::vector<Branch>& branches,
                    const ConeTolerances& tol = {});
std::vector<Subspace> compute_C4(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                 std::uint64_t seed = 0);

C3Result compute_C3(const VarietySpec& spec, const Vec& base, const std::vector<Branch>& branches,
                    const ConeTolerances& tol = {});
C3Result compute_C3(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder, std::uint64_t seed = 0);

// (point, T_point X) at regular points; otherwise the common limit tangent
// over all branches. Throws NotInjective when the limits form two or more
// clusters.
gr::NashPoint nash_lift(const VarietySpec& spec, const Vec& point, const ScaleLadder& ladder,
                        std::uint64_t seed = 0);

struct TangentConeReport {
  Vec base;
  std::vector<Vec> c3_rays;
  bool c3_is_linear = false;
  std::optional<Subspace> c3_span;
  std::vector<Subspace> c4_spaces;
  bool coincide_linearly = false;
  std::vector<Subspace> algebraic_cone;  // lines of the initial form, when available
  std::size_t branch_count = 0;
};

TangentConeReport coincide_linearly(const VarietySpec& spec, const Vec& base, const std::vector<Branch>& branches,
                                    const ConeTolerances& tol = {});
TangentConeReport coincide_linearly(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                    std::uint64_t seed = 0);

}  // namespace nashlab::nash
