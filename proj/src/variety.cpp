#include "nashlab/variety.hpp"

#include <cmath>
#include <complex>

#include "nashlab/poly_parser.hpp"

namespace nashlab {

std::string_view to_string(VarietyKind kind) {
  switch (kind) {
    case VarietyKind::ImplicitReal: return "implicit-real";
    case VarietyKind::ImplicitComplex: return "implicit-complex";
    case VarietyKind::ParametricGraphs: return "parametric-graphs";
    case VarietyKind::Region: return "region";
  }
  return "?";
}

VarietyKind parse_variety_kind(std::string_view text) {
  if (text == "implicit-real") return VarietyKind::ImplicitReal;
  if (text == "implicit-complex") return VarietyKind::ImplicitComplex;
  if (text == "parametric-graphs") return VarietyKind::ParametricGraphs;
  if (text == "region") return VarietyKind::Region;
  throw Error(ErrorKind::InputError, "unknown variety kind '" + std::string(text) + "'");
}

GraphFunction::GraphFunction(std::string text_in, double lo_in, double hi_in)
    : text(std::move(text_in)), h(poly::Expr::parse(text)), dh(h.derivative()), lo(lo_in), hi(hi_in) {
  if (!(lo < hi)) throw Error(ErrorKind::InputError, "graph domain must satisfy lo < hi");
}

VarietySpec VarietySpec::implicit_real(const std::string& equation, std::vector<std::string> variables) {
  VarietySpec s;
  s.kind = VarietyKind::ImplicitReal;
  s.equation = poly::parse_equation(equation, variables);
  if (s.equation.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "defining equation is identically zero");
  s.equation_text = equation;
  s.ambient_dim = variables.size();
  s.set_dim = s.ambient_dim - 1;
  s.grad = poly::gradient(s.equation);
  s.variables = std::move(variables);
  return s;
}

VarietySpec VarietySpec::implicit_complex(const std::string& equation, std::vector<std::string> variables) {
  if (variables.size() != 2) {
    throw Error(ErrorKind::UnsupportedSpec, "implicit-complex specs are plane curves in two variables");
  }
  VarietySpec s;
  s.kind = VarietyKind::ImplicitComplex;
  s.equation = poly::parse_equation(equation, variables);
  if (s.equation.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "defining equation is identically zero");
  s.equation_text = equation;
  s.ambient_dim = 4;
  s.set_dim = 2;
  s.grad = poly::gradient(s.equation);
  s.variables = std::move(variables);
  return s;
}

VarietySpec VarietySpec::parametric(std::vector<GraphFunction> graphs) {
  if (graphs.empty()) throw Error(ErrorKind::InputError, "parametric spec needs at least one graph");
  VarietySpec s;
  s.kind = VarietyKind::ParametricGraphs;
  s.graphs = std::move(graphs);
  s.variables = {"x", "y"};
  s.ambient_dim = 2;
  s.set_dim = 1;
  return s;
}

VarietySpec VarietySpec::region(const std::string& inequality, std::vector<std::string> variables) {
  VarietySpec s;
  s.kind = VarietyKind::Region;
  s.equation = poly::parse_polynomial(inequality, variables);
  s.equation_text = inequality;
  s.ambient_dim = variables.size();
  s.set_dim = s.ambient_dim;
  s.grad = poly::gradient(s.equation);
  s.variables = std::move(variables);
  return s;
}

double VarietySpec::relative_gradient(std::span<const double> point) const {
  if (point.size() != ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from the ambient dimension");
  }
  double num = 0.0, den = 0.0;
  if (kind == VarietyKind::ImplicitComplex) {
    const std::complex<double> z[2] = {{point[0], point[2]}, {point[1], point[3]}};
    const double mods[2] = {std::abs(z[0]), std::abs(z[1])};
    for (const auto& g : grad) {
      num += std::norm(g.evaluate<std::complex<double>>(z));
      den += std::pow(g.abs_term_sum(mods), 2);
    }
  } else if (kind == VarietyKind::ImplicitReal || kind == VarietyKind::Region) {
    for (const auto& g : grad) {
      num += std::pow(g.evaluate(point), 2);
      den += std::pow(g.abs_term_sum(point), 2);
    }
  } else {
    return 1.0;
  }
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

bool VarietySpec::contains(std::span<const double> point, double tol) const {
  if (point.size() != ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension differs from the ambient dimension");
  }
  switch (kind) {
    case VarietyKind::ImplicitReal: {
      const double scale = std::max(1e-300, equation.abs_term_sum(point));
      return std::fabs(equation.evaluate(point)) <= tol * scale || equation.evaluate(point) == 0.0;
    }
    case VarietyKind::ImplicitComplex: {
      const std::complex<double> z[2] = {{point[0], point[2]}, {point[1], point[3]}};
      const double mods[2] = {std::abs(z[0]), std::abs(z[1])};
      const double scale = equation.abs_term_sum(mods);
      const double r = std::abs(equation.evaluate<std::complex<double>>(z));
      return r == 0.0 || r <= tol * scale;
    }
    case VarietyKind::ParametricGraphs:
      for (const auto& g : graphs) {
        if (!g.contains(point[0])) continue;
        const double y = g.h.evaluate(point[0]);
        if (std::fabs(y - point[1]) <= tol * std::max(1.0, std::fabs(y))) return true;
      }
      return false;
    case VarietyKind::Region: {
      const double scale = std::max(1e-300, equation.abs_term_sum(point));
      return equation.evaluate(point) <= tol * scale;
    }
  }
  return false;
}

}  // namespace nashlab
