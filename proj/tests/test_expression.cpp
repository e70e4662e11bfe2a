#include <doctest.h>

#include <cmath>

#include "osculant/expression.hpp"
#include "osculant/gallery.hpp"
#include "osculant/immersion.hpp"

using namespace osculant;

namespace {

double eval1(const std::string& text, double u1, int n = 1) {
  return eval(parse_expression(text, n), n == 1 ? Vec{u1} : Vec{u1, 0.0});
}

void check_roundtrip(const Expr& e) {
  std::string printed = to_string(e);
  CAPTURE(printed);
  Expr reparsed = parse_expression(printed, 8);
  CHECK(e.structurally_equal(reparsed));
}

}  // namespace

TEST_CASE("evaluation and precedence") {
  Expr e = parse_expression("u1^2 + 2*u1*u2", 2);
  CHECK(eval(e, {1.0, 1.0}) == 3.0);

  CHECK(eval1("sin(u1)*cos(u1)", 0.0) == 0.0);
  CHECK(eval1("-u1^2", 2.0) == -4.0);
  CHECK(eval1("-2^2", 0.0) == -4.0);
  CHECK(eval1("1 - 2 - 3", 0.0) == -4.0);
  CHECK(eval1("6/3/2", 0.0) == 1.0);
  CHECK(eval1("2^3", 0.0) == 8.0);
  CHECK(eval1("u1^0", 5.0) == 1.0);
  CHECK(eval1("2*-3", 0.0) == -6.0);
  CHECK(eval1("(1 + u1)*(1 - u1)", 2.0) == -3.0);
  CHECK(eval1("exp(0)", 0.0) == 1.0);
  CHECK(eval1("1e-3 + 0.5", 0.0) == doctest::Approx(0.5010).epsilon(1e-15));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_expression("u3", 2), ExprError);
  try {
    parse_expression("u1 + u3*2", 2);
    FAIL("expected an error");
  } catch (const ExprError& err) {
    CHECK(err.position == 7);
    CHECK(std::string(err.what()).find("out of range") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expression("u1 +", 1), ExprError);
  CHECK_THROWS_AS(parse_expression("(u1", 1), ExprError);
  CHECK_THROWS_AS(parse_expression("u1^-2", 1), ExprError);
  CHECK_THROWS_AS(parse_expression("u1^2.5", 1), ExprError);
  CHECK_THROWS_AS(parse_expression("tan(u1)", 1), ExprError);
  CHECK_THROWS_AS(parse_expression("u1 u1", 1), ExprError);
  CHECK_THROWS_AS(parse_expression("", 1), ExprError);
}

TEST_CASE("printer round-trips") {
  const char* samples[] = {
      "u1^2 + 2*u1*u2",
      "sin(u1)*cos(u2) - exp(u1*u2)",
      "-u1^3",
      "(u1 + u2)/(1 + u1^2)",
      "1 - 2 - 3",
      "2/u1/u2",
      "-(u1 + u2)",
      "0.125*u1^4 - 1e-3",
  };
  for (const char* s : samples) check_roundtrip(parse_expression(s, 8));

  // Trees with negative literal coefficients, as the generators emit them.
  check_roundtrip(Expr::mul(Expr::number(-0.53), Expr::pow(Expr::variable(1), 2)));
  check_roundtrip(Expr::pow(Expr::variable(2), 0));
  check_roundtrip(Expr::sub(Expr::number(1.0), Expr::number(-2.0)));

  for (const GalleryEntry& entry : builtin_gallery())
    for (const Expr& component : entry.spec.immersion.components)
      check_roundtrip(component);

  Immersion random = random_polynomial_immersion(3, 10, 4, 99);
  for (const Expr& component : random.components) check_roundtrip(component);
}

TEST_CASE("jet evaluation matches scalar evaluation") {
  Expr e = parse_expression("exp(sin(u1))*(1 + u2^2) - u1/(2 + u2)", 2);
  const Vec point{0.4, -0.7};
  Jet j = eval_jet(e, point, 3);
  CHECK(j.value() == doctest::Approx(eval(e, point)).epsilon(1e-15));
}
