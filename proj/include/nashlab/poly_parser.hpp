#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nashlab/polynomial.hpp"

namespace nashlab::poly {

// Grammar (whitespace insignificant, no implicit multiplication):
//   expr     := [sign] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := base ('^' uint)?
//   base     := variable | rational | '(' expr ')'
//   rational := int ('/' uint)? | decimal
// The optional leading sign lets canonical output with a negative leading
// coefficient parse back.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables);

// "lhs = rhs" becomes lhs - rhs; text without '=' is parsed as a polynomial.
Polynomial parse_equation(std::string_view text, const std::vector<std::string>& variables);

// Canonical form: terms in descending graded-lex order, exact rational coefficients.
std::string to_string(const Polynomial& p, const std::vector<std::string>& variables);

}  // namespace nashlab::poly
