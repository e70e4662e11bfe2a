#include "osculant/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace osculant {

Expr Expr::number(double value) {
  Expr e;
  e.kind = Kind::literal;
  e.literal = value;
  return e;
}

Expr Expr::variable(int index) {
  Expr e;
  e.kind = Kind::variable;
  e.var_index = index;
  return e;
}

namespace {
Expr binary(Expr::Kind kind, Expr a, Expr b) {
  Expr e;
  e.kind = kind;
  e.children.reserve(2);
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}
}  // namespace

Expr Expr::add(Expr a, Expr b) { return binary(Kind::add, std::move(a), std::move(b)); }
Expr Expr::sub(Expr a, Expr b) { return binary(Kind::sub, std::move(a), std::move(b)); }
Expr Expr::mul(Expr a, Expr b) { return binary(Kind::mul, std::move(a), std::move(b)); }
Expr Expr::div(Expr a, Expr b) { return binary(Kind::div, std::move(a), std::move(b)); }

Expr Expr::neg(Expr a) {
  Expr e;
  e.kind = Kind::neg;
  e.children.push_back(std::move(a));
  return e;
}

Expr Expr::pow(Expr base, int exponent) {
  Expr e;
  e.kind = Kind::pow;
  e.exponent = exponent;
  e.children.push_back(std::move(base));
  return e;
}

Expr Expr::call(Func f, Expr arg) {
  Expr e;
  e.kind = Kind::call;
  e.func = f;
  e.children.push_back(std::move(arg));
  return e;
}

bool Expr::structurally_equal(const Expr& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::literal:
      if (literal != other.literal) return false;
      break;
    case Kind::variable:
      if (var_index != other.var_index) return false;
      break;
    case Kind::pow:
      if (exponent != other.exponent) return false;
      break;
    case Kind::call:
      if (func != other.func) return false;
      break;
    default:
      break;
  }
  if (children.size() != other.children.size()) return false;
  for (size_t i = 0; i < children.size(); ++i)
    if (!children[i].structurally_equal(other.children[i])) return false;
  return true;
}

// ============================================================================
// Parser
// ============================================================================

namespace {

class Parser {
 public:
  Parser(std::string_view text, int num_vars)
      : text_(text), num_vars_(num_vars) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ < text_.size())
      fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ExprError(message, static_cast<int>(pos_) + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (consume('+')) {
        e = Expr::add(std::move(e), parse_term());
      } else if (consume('-')) {
        e = Expr::sub(std::move(e), parse_term());
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (consume('*')) {
        e = Expr::mul(std::move(e), parse_factor());
      } else if (consume('/')) {
        e = Expr::div(std::move(e), parse_factor());
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    if (consume('-')) {
      Expr inner = parse_power();
      // Fold a bare negated literal so printed negative coefficients
      // round-trip to the same tree.
      if (inner.kind == Expr::Kind::literal)
        return Expr::number(-inner.literal);
      return Expr::neg(std::move(inner));
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (consume('^')) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '-')
        fail("negative exponent not allowed");
      int exponent = parse_integer("exponent");
      return Expr::pow(std::move(base), exponent);
    }
    return base;
  }

  int parse_integer(const char* what) {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' ||
                                text_[pos_] == 'E'))
      fail(std::string(what) + " must be an integer");
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    (void)ptr;
    if (ec != std::errc()) fail(std::string("invalid ") + what);
    return value;
  }

  Expr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (c == 'u' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      size_t index_pos = pos_;
      int index = parse_integer("variable index");
      if (index < 1 || index > num_vars_)
        throw ExprError("variable index out of range",
                        static_cast<int>(index_pos) + 1);
      return Expr::variable(index);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_call();
    fail("unexpected character");
  }

  Expr parse_number() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else
      }
    }
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + start, text_.data() + pos_, value);
    (void)ptr;
    if (ec != std::errc()) fail("invalid number literal");
    return Expr::number(value);
  }

  Expr parse_call() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    Func f;
    if (name == "sin") {
      f = Func::sin;
    } else if (name == "cos") {
      f = Func::cos;
    } else if (name == "exp") {
      f = Func::exp;
    } else {
      throw ExprError("unknown function '" + std::string(name) + "'",
                      static_cast<int>(start) + 1);
    }
    if (!consume('(')) fail("expected '(' after function name");
    Expr arg = parse_expr();
    if (!consume(')')) fail("expected ')'");
    return Expr::call(f, std::move(arg));
  }

  std::string_view text_;
  int num_vars_;
  size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, int num_vars) {
  if (num_vars < 1) throw std::invalid_argument("need at least one variable");
  return Parser(text, num_vars).parse();
}

// ============================================================================
// Printing
// ============================================================================

namespace {

// Precedence levels: additive 1, multiplicative 2, unary minus 3, power 4,
// atoms 5.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub:
      return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div:
      return 2;
    case Expr::Kind::neg:
      return 3;
    case Expr::Kind::pow:
      return 4;
    default:
      return 5;
  }
}

std::string literal_to_string(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

void print(const Expr& e, std::string& out, int parent_prec, bool right_side) {
  int prec = precedence(e);
  bool parens = prec < parent_prec ||
                (prec == parent_prec && right_side && parent_prec <= 2);
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::literal:
      // A bare negative literal reads fine after +, -, * and /, but as a
      // power base or under unary minus it needs its own parentheses.
      if (e.literal < 0.0 && !parens && parent_prec >= 3) {
        out += '(';
        out += literal_to_string(e.literal);
        out += ')';
      } else {
        out += literal_to_string(e.literal);
      }
      break;
    case Expr::Kind::variable:
      out += 'u';
      out += std::to_string(e.var_index);
      break;
    case Expr::Kind::add:
      print(e.children[0], out, 1, false);
      out += " + ";
      print(e.children[1], out, 1, true);
      break;
    case Expr::Kind::sub:
      print(e.children[0], out, 1, false);
      out += " - ";
      print(e.children[1], out, 1, true);
      break;
    case Expr::Kind::mul:
      print(e.children[0], out, 2, false);
      out += "*";
      print(e.children[1], out, 2, true);
      break;
    case Expr::Kind::div:
      print(e.children[0], out, 2, false);
      out += "/";
      print(e.children[1], out, 2, true);
      break;
    case Expr::Kind::neg:
      out += '-';
      print(e.children[0], out, 3, true);
      break;
    case Expr::Kind::pow:
      print(e.children[0], out, 5, false);  // base must be an atom
      out += '^';
      out += std::to_string(e.exponent);
      break;
    case Expr::Kind::call:
      switch (e.func) {
        case Func::sin: out += "sin"; break;
        case Func::cos: out += "cos"; break;
        case Func::exp: out += "exp"; break;
      }
      out += '(';
      print(e.children[0], out, 0, false);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out, 0, false);
  return out;
}

// ============================================================================
// Evaluation
// ============================================================================

double eval(const Expr& e, const Vec& point) {
  switch (e.kind) {
    case Expr::Kind::literal:
      return e.literal;
    case Expr::Kind::variable: {
      size_t i = static_cast<size_t>(e.var_index - 1);
      if (i >= point.size())
        throw std::invalid_argument("evaluation point has too few coordinates");
      return point[i];
    }
    case Expr::Kind::add:
      return eval(e.children[0], point) + eval(e.children[1], point);
    case Expr::Kind::sub:
      return eval(e.children[0], point) - eval(e.children[1], point);
    case Expr::Kind::mul:
      return eval(e.children[0], point) * eval(e.children[1], point);
    case Expr::Kind::div:
      return eval(e.children[0], point) / eval(e.children[1], point);
    case Expr::Kind::neg:
      return -eval(e.children[0], point);
    case Expr::Kind::pow:
      return std::pow(eval(e.children[0], point), e.exponent);
    case Expr::Kind::call: {
      double a = eval(e.children[0], point);
      switch (e.func) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::exp: return std::exp(a);
      }
    }
  }
  throw std::logic_error("unreachable expression kind");
}

Jet eval_jet(const Expr& e, const Vec& point, int order) {
  const int n = static_cast<int>(point.size());
  switch (e.kind) {
    case Expr::Kind::literal:
      return Jet::constant(e.literal, n, order);
    case Expr::Kind::variable: {
      int i = e.var_index - 1;
      if (i < 0 || i >= n)
        throw std::invalid_argument("evaluation point has too few coordinates");
      return Jet::variable(i, point[static_cast<size_t>(i)], n, order);
    }
    case Expr::Kind::add:
      return eval_jet(e.children[0], point, order) +
             eval_jet(e.children[1], point, order);
    case Expr::Kind::sub:
      return eval_jet(e.children[0], point, order) -
             eval_jet(e.children[1], point, order);
    case Expr::Kind::mul:
      return eval_jet(e.children[0], point, order) *
             eval_jet(e.children[1], point, order);
    case Expr::Kind::div:
      return eval_jet(e.children[0], point, order) /
             eval_jet(e.children[1], point, order);
    case Expr::Kind::neg:
      return -eval_jet(e.children[0], point, order);
    case Expr::Kind::pow:
      return pow(eval_jet(e.children[0], point, order), e.exponent);
    case Expr::Kind::call: {
      Jet a = eval_jet(e.children[0], point, order);
      switch (e.func) {
        case Func::sin: return sin(a);
        case Func::cos: return cos(a);
        case Func::exp: return exp(a);
      }
    }
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace osculant
