#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "nashlab/ext_real.hpp"

namespace nashlab::poly {

// Closed-form scalar function of one variable: rational functions, rational
// powers (non-integer powers on positive arguments only), exp, log, sqrt and
// their compositions. Differentiated structurally, so tangent slopes of graphs
// such as x^3 exp(-1/x) are exact up to rounding.
//
// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('-'|'+') unary | power
//   power   := primary ('^' exponent)?
//   exponent:= ['-'] number ['/' number] | '(' ['-'] number ['/' number] ')'
//   primary := number | variable | ('exp'|'log'|'sqrt') '(' expr ')' | '(' expr ')'
class Expr {
 public:
  struct Node;

  Expr();  // the constant 0
  static Expr parse(std::string_view text, const std::string& variable = "x");
  static Expr constant(double value);
  static Expr variable();

  double evaluate(double x) const;
  ExtReal evaluate(const ExtReal& x) const;

  Expr derivative() const;
  bool is_constant() const;
  std::string to_string() const;

  const std::string& variable_name() const { return var_; }

 private:
  explicit Expr(std::shared_ptr<const Node> root, std::string var = "x");

  std::shared_ptr<const Node> root_;
  std::string var_ = "x";
};

}  // namespace nashlab::poly
