#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osculant/jet.hpp"
#include "osculant/linalg.hpp"

namespace osculant {

enum class Func { sin, cos, exp };

/// Abstract syntax tree over real literals, variables u1..un, the binary
/// operators + - * /, unary minus, integer powers and the calls sin, cos,
/// exp. Immutable value type.
struct Expr {
  enum class Kind { literal, variable, add, sub, mul, div, neg, pow, call };

  Kind kind = Kind::literal;
  double literal = 0.0;
  int var_index = 0;  // 1-based
  int exponent = 0;   // for Kind::pow, always >= 0
  Func func = Func::sin;
  std::vector<Expr> children;

  static Expr number(double value);
  static Expr variable(int index);
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr neg(Expr a);
  static Expr pow(Expr base, int exponent);
  static Expr call(Func f, Expr arg);

  bool structurally_equal(const Expr& other) const;
};

/// Parse failure with the 1-based character position inside the text.
struct ExprError : std::runtime_error {
  ExprError(const std::string& message, int position_)
      : std::runtime_error(message), position(position_) {}
  int position;
};

/// Recursive-descent parser for the grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('-')? power
///   power  := atom ('^' integer)?
///   atom   := number | 'u' integer | func '(' expr ')' | '(' expr ')'
///   func   := 'sin' | 'cos' | 'exp'
/// Variable indices must lie in [1, num_vars]; exponents must be non-negative
/// integers.
Expr parse_expression(std::string_view text, int num_vars);

/// Minimal-parenthesis rendering; reparsing yields a structurally identical
/// tree. Literals print in shortest round-trip form.
std::string to_string(const Expr& e);

double eval(const Expr& e, const Vec& point);
Jet eval_jet(const Expr& e, const Vec& point, int order);

}  // namespace osculant
