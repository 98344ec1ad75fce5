#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nashlab/grassmannian.hpp"
#include "nashlab/variety.hpp"

namespace nashlab::sampler {

using gr::Vec;

// Decreasing scales t_0 > t_1 > ... > 0.
struct ScaleLadder {
  std::vector<double> scales;

  // t_j = top * ratio^j, j = 0..count-1. Default: 0.1 * 2^-j, j = 0..11.
  static ScaleLadder geometric(double top = 0.1, double ratio = 0.5, std::size_t count = 12);
  // count rungs spaced geometrically from hi down to lo.
  static ScaleLadder between(double hi, double lo, std::size_t count);
};

// Points of the set on the line {<x - center, direction> = value}.
struct Fiber {
  Vec direction;
  double value = 0.0;
  std::vector<Vec> points;  // sorted along the fiber line
  bool degenerate = false;  // a touching root was met; the count is not generic
};

// A half-branch: the points of one local branch over one side of the
// projection, one point per rung.
struct Branch {
  int side = 0;                // +1 / -1 for real projections, ray index for complex and region specs
  std::vector<double> scales;  // the ladder rungs
  std::vector<Vec> points;     // one per rung; for graphs y may underflow to 0
  int graph = -1;              // parametric specs: index of the graph
  std::vector<double> params;  // parametric specs: abscissa per rung
};

// Projection used for fibers at a base point, with the cone lines it was
// tested against.
struct Projection {
  Vec direction;                       // unit; fibers are level sets of <x - base, direction>
  std::vector<gr::Subspace> cone;      // lines (real) or realified complex lines of the initial form
  double transversality = 0.0;         // min delta between the fiber line and the cone lines
  bool random = false;                 // true when no coordinate axis was transversal enough
};

// Lines of the algebraic tangent cone {in_base(f) = 0} for plane curves,
// as Subspaces of R^2 (real) or R^4 (complex, realified).
std::vector<gr::Subspace> algebraic_cone(const VarietySpec& spec, const Vec& base);

// Best coordinate projection when its fiber line is at delta > 0.1 from every
// cone line, else a seeded random direction passing the same test.
Projection choose_projection(const VarietySpec& spec, const Vec& base, std::uint64_t seed = 0);

Fiber fiber_points(const VarietySpec& spec, const Vec& direction, double value, double window);
Fiber fiber_points(const VarietySpec& spec, const Vec& direction, double value, double window,
                   const Vec& center);

// Complex fibers {<z - center, direction> = w} of an implicit-complex spec,
// as realified points (Re x, Re y, Im x, Im y) within the window.
std::vector<Vec> complex_fiber_points(const VarietySpec& spec, const Vec& direction, std::complex<double> w,
                                      double window, const Vec& center);

struct ParityReport {
  int parity = 0;
  std::vector<double> values;  // fiber offsets used
  std::vector<int> counts;     // fiber cardinalities
  int dissent = 0;
};

// Parity of the generic fiber count near base, majority over 8 jittered
// fibers at offsets +-1e-2 * 2^-j (j = 2..5). The fiber line must be at
// delta > 0.1 from every line in cone_lines.
ParityReport multiplicity_mod2(const VarietySpec& spec, const Vec& base, const Vec& direction,
                               const std::vector<gr::Subspace>& cone_lines, std::uint64_t seed = 0);

std::vector<Branch> sample_branches(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                    std::uint64_t seed = 0);

// Largest number of branches over one side.
std::size_t branch_count(const std::vector<Branch>& branches);

}  // namespace nashlab::sampler
