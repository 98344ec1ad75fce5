#include "nashlab/poly_parser.hpp"

#include <cctype>
#include <sstream>

namespace nashlab::poly {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
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

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Polynomial expr() {
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    Polynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  Polynomial factor() {
    Polynomial b = base();
    if (accept('^')) {
      skip_ws();
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("exponent must be an unsigned integer");
      }
      const std::string digits = read_digits();
      if (digits.size() > 6) fail("exponent too large");
      b = b.pow(static_cast<unsigned>(std::stoul(digits)));
    }
    return b;
  }

  Polynomial base() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return rational();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return variable();
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string read_digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Polynomial rational() {
    const std::size_t start = pos_;
    std::string int_part = read_digits();
    Rational value;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::string frac = read_digits();
      if (int_part.empty() && frac.empty()) {
        pos_ = start;
        fail("malformed number");
      }
      boost::multiprecision::cpp_int num(int_part.empty() ? std::string("0") : int_part);
      boost::multiprecision::cpp_int den = 1;
      for (char d : frac) {
        num = num * 10 + (d - '0');
        den *= 10;
      }
      value = Rational(num, den);
    } else {
      value = Rational(boost::multiprecision::cpp_int(int_part));
      if (accept('/')) {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          fail("expected unsigned integer denominator");
        }
        boost::multiprecision::cpp_int den(read_digits());
        if (den == 0) fail("zero denominator");
        value /= Rational(den);
      }
    }
    return Polynomial::constant(vars_.size(), value);
  }

  Polynomial variable() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return Polynomial::variable(vars_.size(), i);
    }
    throw Error(ErrorKind::UnknownVariable, "'" + name + "' at offset " + std::to_string(start));
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

std::string rational_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables) {
  if (variables.empty()) throw Error(ErrorKind::DimensionMismatch, "no variables given");
  return Parser(text, variables).parse();
}

Polynomial parse_equation(std::string_view text, const std::vector<std::string>& variables) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) return parse_polynomial(text, variables);
  if (text.find('=', eq + 1) != std::string_view::npos) {
    throw SyntaxError(text.find('=', eq + 1), "more than one '='");
  }
  Polynomial lhs = parse_polynomial(text.substr(0, eq), variables);
  Polynomial rhs;
  try {
    rhs = parse_polynomial(text.substr(eq + 1), variables);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.position() + eq + 1, "in right-hand side");
  }
  return lhs - rhs;
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& variables) {
  if (variables.size() != p.num_vars()) {
    throw Error(ErrorKind::DimensionMismatch, "variable name count differs from num_vars");
  }
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;

    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += variables[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += rational_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += rational_string(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace nashlab::poly
