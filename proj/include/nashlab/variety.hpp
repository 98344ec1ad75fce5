#pragma once

#include <span>
#include <string>
#include <vector>

#include "nashlab/expr.hpp"
#include "nashlab/polynomial.hpp"

namespace nashlab {

enum class VarietyKind { ImplicitReal, ImplicitComplex, ParametricGraphs, Region };

std::string_view to_string(VarietyKind kind);
VarietyKind parse_variety_kind(std::string_view text);

// One graph y = h(x) over the closed interval [lo, hi].
struct GraphFunction {
  std::string text;
  poly::Expr h;
  poly::Expr dh;
  double lo = 0.0;
  double hi = 0.0;

  GraphFunction(std::string text, double lo, double hi);
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Description of the set under study.
//   implicit-real:     {f = 0} in R^n, d = n - 1
//   implicit-complex:  {f = 0} in C^2 = R^4 (coordinates Re x, Re y, Im x, Im y), d = 2
//   parametric-graphs: union of graphs in R^2, d = 1
//   region:            {f <= 0} in R^n, d = n
struct VarietySpec {
  VarietyKind kind = VarietyKind::ImplicitReal;
  std::vector<std::string> variables;
  std::string equation_text;
  poly::Polynomial equation;
  std::vector<poly::Polynomial> grad;  // gradient of equation (implicit and region kinds)
  std::vector<GraphFunction> graphs;
  std::size_t ambient_dim = 0;  // real dimension n
  std::size_t set_dim = 0;      // real dimension d

  static VarietySpec implicit_real(const std::string& equation, std::vector<std::string> variables);
  static VarietySpec implicit_complex(const std::string& equation,
                                      std::vector<std::string> variables = {"x", "y"});
  static VarietySpec parametric(std::vector<GraphFunction> graphs);
  static VarietySpec region(const std::string& inequality, std::vector<std::string> variables);

  bool is_implicit() const {
    return kind == VarietyKind::ImplicitReal || kind == VarietyKind::ImplicitComplex;
  }

  // |grad f| divided by the gradient of the absolute term sum at the point.
  // Below 1e-9 the point is treated as singular; a relative threshold keeps
  // the test meaningful at points very close to a singularity.
  double relative_gradient(std::span<const double> point) const;

  // Membership up to a residual relative to the natural term scale.
  bool contains(std::span<const double> point, double tol = 1e-9) const;
};

}  // namespace nashlab
