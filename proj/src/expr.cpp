#include "nashlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "nashlab/error.hpp"

namespace nashlab::poly {

enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sqrt };

struct Expr::Node {
  Kind kind;
  double value = 0.0;  // constant value, or the exponent of Pow
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  return std::make_shared<const Expr::Node>(Expr::Node{k, v, std::move(a), std::move(b)});
}

NodePtr konst(double v) { return make(Kind::Const, nullptr, nullptr, v); }

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::Const && n->value == v; }

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const) return konst(a->value + b->value);
  return make(Kind::Add, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (a->kind == Kind::Const) return konst(-a->value);
  if (a->kind == Kind::Neg) return a->a;
  return make(Kind::Neg, std::move(a));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0)) return a;
  if (is_const(a, 0)) return neg(std::move(b));
  if (a->kind == Kind::Const && b->kind == Kind::Const) return konst(a->value - b->value);
  return make(Kind::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0) || is_const(b, 0)) return konst(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const) return konst(a->value * b->value);
  return make(Kind::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0)) return konst(0);
  if (is_const(b, 1)) return a;
  return make(Kind::Div, std::move(a), std::move(b));
}

NodePtr power(NodePtr a, double q) {
  if (q == 0.0) return konst(1);
  if (q == 1.0) return a;
  if (a->kind == Kind::Const) return konst(std::pow(a->value, q));
  return make(Kind::Pow, std::move(a), nullptr, q);
}

NodePtr differentiate(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Const: return konst(0);
    case Kind::Var: return konst(1);
    case Kind::Add: return add(differentiate(n->a), differentiate(n->b));
    case Kind::Sub: return sub(differentiate(n->a), differentiate(n->b));
    case Kind::Neg: return neg(differentiate(n->a));
    case Kind::Mul:
      return add(mul(differentiate(n->a), n->b), mul(n->a, differentiate(n->b)));
    case Kind::Div:
      return div(sub(mul(differentiate(n->a), n->b), mul(n->a, differentiate(n->b))),
                 power(n->b, 2.0));
    case Kind::Pow:
      return mul(mul(konst(n->value), power(n->a, n->value - 1.0)), differentiate(n->a));
    case Kind::Exp: return mul(n, differentiate(n->a));
    case Kind::Log: return div(differentiate(n->a), n->a);
    case Kind::Sqrt: return div(differentiate(n->a), mul(konst(2), n));
  }
  return konst(0);
}

double pow_real(double x, double q) { return std::pow(x, q); }
ExtReal pow_real(const ExtReal& x, double q) { return pow(x, q); }
double exp_real(double x) { return std::exp(x); }
ExtReal exp_real(const ExtReal& x) { return exp(x); }
double log_real(double x) { return std::log(x); }
ExtReal log_real(const ExtReal& x) { return log(x); }
double sqrt_real(double x) { return std::sqrt(x); }
ExtReal sqrt_real(const ExtReal& x) { return sqrt(x); }
bool negative(double x) { return x < 0; }
bool negative(const ExtReal& x) { return x.sign() < 0; }

template <typename T>
T eval(const Expr::Node& n, const T& x) {
  switch (n.kind) {
    case Kind::Const: return T(n.value);
    case Kind::Var: return x;
    case Kind::Add: return eval(*n.a, x) + eval(*n.b, x);
    case Kind::Sub: return eval(*n.a, x) - eval(*n.b, x);
    case Kind::Neg: return -eval(*n.a, x);
    case Kind::Mul: return eval(*n.a, x) * eval(*n.b, x);
    case Kind::Div: return eval(*n.a, x) / eval(*n.b, x);
    case Kind::Pow: {
      const T base = eval(*n.a, x);
      if (n.value != std::floor(n.value) && negative(base)) {
        throw Error(ErrorKind::DomainViolation, "non-integer power of a negative argument");
      }
      return pow_real(base, n.value);
    }
    case Kind::Exp: return exp_real(eval(*n.a, x));
    case Kind::Log: return log_real(eval(*n.a, x));
    case Kind::Sqrt: return sqrt_real(eval(*n.a, x));
  }
  return T(0.0);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_exponent(double q) {
  if (q == std::floor(q)) return format_number(q);
  for (int den = 2; den <= 64; ++den) {
    const double num = q * den;
    if (std::fabs(num - std::round(num)) < 1e-12) {
      return "(" + format_number(std::round(num)) + "/" + std::to_string(den) + ")";
    }
  }
  return "(" + format_number(q) + ")";
}

std::string print(const Expr::Node& n, const std::string& var) {
  switch (n.kind) {
    case Kind::Const: return n.value < 0 ? "(" + format_number(n.value) + ")" : format_number(n.value);
    case Kind::Var: return var;
    case Kind::Add: return "(" + print(*n.a, var) + " + " + print(*n.b, var) + ")";
    case Kind::Sub: return "(" + print(*n.a, var) + " - " + print(*n.b, var) + ")";
    case Kind::Neg: return "(-" + print(*n.a, var) + ")";
    case Kind::Mul: return print(*n.a, var) + "*" + print(*n.b, var);
    case Kind::Div: return print(*n.a, var) + "/" + print(*n.b, var);
    case Kind::Pow: return print(*n.a, var) + "^" + format_exponent(n.value);
    case Kind::Exp: return "exp(" + print(*n.a, var) + ")";
    case Kind::Log: return "log(" + print(*n.a, var) + ")";
    case Kind::Sqrt: return "sqrt(" + print(*n.a, var) + ")";
  }
  return "?";
}

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::string& var) : text_(text), var_(var) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = add(acc, term());
      } else if (accept('-')) {
        acc = sub(acc, term());
      } else {
        return acc;
      }
    }
  }

  NodePtr term() {
    NodePtr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = mul(acc, unary());
      } else if (accept('/')) {
        acc = div(acc, unary());
      } else {
        return acc;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return neg(unary());
    if (accept('+')) return unary();
    NodePtr base = primary();
    if (accept('^')) return power(base, exponent());
    return base;
  }

  double exponent() {
    const bool paren = accept('(');
    const bool minus = accept('-');
    double q = number();
    if (accept('/')) {
      const double den = number();
      if (den == 0.0) fail("zero denominator in exponent");
      q /= den;
    }
    if (paren && !accept(')')) fail("expected ')'");
    return minus ? -q : q;
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected number");
    try {
      return std::stod(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return konst(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      if (name == var_) return make(Kind::Var);
      Kind fn;
      if (name == "exp") {
        fn = Kind::Exp;
      } else if (name == "log") {
        fn = Kind::Log;
      } else if (name == "sqrt") {
        fn = Kind::Sqrt;
      } else {
        throw Error(ErrorKind::UnknownVariable, "'" + name + "' at offset " + std::to_string(start));
      }
      if (!accept('(')) fail("expected '(' after " + name);
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(fn, std::move(arg));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : root_(konst(0)) {}

Expr::Expr(std::shared_ptr<const Node> root, std::string var) : root_(std::move(root)), var_(std::move(var)) {}

Expr Expr::parse(std::string_view text, const std::string& variable) {
  return Expr(ExprParser(text, variable).parse(), variable);
}

Expr Expr::constant(double value) { return Expr(konst(value)); }

Expr Expr::variable() { return Expr(make(Kind::Var)); }

double Expr::evaluate(double x) const { return eval(*root_, x); }

ExtReal Expr::evaluate(const ExtReal& x) const { return eval(*root_, x); }

Expr Expr::derivative() const { return Expr(differentiate(root_), var_); }

bool Expr::is_constant() const { return root_->kind == Kind::Const; }

std::string Expr::to_string() const { return print(*root_, var_); }

}  // namespace nashlab::poly
