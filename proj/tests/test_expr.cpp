#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expr_cases.hpp"
#include "ifd/expr.hpp"

using ifd::Expr;

TEST_CASE("grammar suite: precedence, associativity, error locations") {
  CHECK(expr_cases::run_grammar_suite() == 0);
  CHECK(expr_cases::eval_cases().size() + expr_cases::error_cases().size() >= 50);
}

TEST_CASE("round-trip property on generated trees") {
  CHECK(expr_cases::run_roundtrip_property(1000) == 0);
}

TEST_CASE("parameters must be declared and bound") {
  CHECK_THROWS_AS(Expr::parse("a*x"), ifd::SyntaxError);
  Expr e = Expr::parse("a*x+b", {"a", "b"});
  CHECK(e.free_parameters() == std::set<std::string>{"a", "b"});
  CHECK(e.eval(2.0, 0.0, {{"a", 3.0}, {"b", 1.0}}) == doctest::Approx(7.0));
  CHECK_THROWS_AS(e.eval(2.0, 0.0, {{"a", 3.0}}), ifd::EvalError);
}

TEST_CASE("evaluation errors carry the offending subexpression") {
  try {
    Expr::parse("1/(x-x)").eval(1.0, 0.0);
    FAIL("expected EvalError");
  } catch (const ifd::EvalError& e) {
    CHECK(e.subexpression() == "1/(x-x)");
  }
  try {
    Expr::parse("log(x-2)").eval(1.0, 0.0);
    FAIL("expected EvalError");
  } catch (const ifd::EvalError& e) {
    CHECK(e.subexpression() == "log(x-2)");
  }
  CHECK_THROWS_AS(Expr::parse("exp(1e6)").eval(0, 0), ifd::EvalError); // overflow
}

TEST_CASE("dependency analysis") {
  CHECK(Expr::parse("sin(x)").depends_on_x());
  CHECK_FALSE(Expr::parse("sin(x)").depends_on_t());
  CHECK(Expr::parse("x*t").depends_on_t());
  CHECK_FALSE(Expr::parse("pi+e").depends_on_x());
}

TEST_CASE("structural equality ignores formatting") {
  CHECK(Expr::parse("1 + 2*x") == Expr::parse("1+2 * x"));
  CHECK_FALSE(Expr::parse("1+2*x") == Expr::parse("(1+2)*x"));
}

TEST_CASE("syntax error message names the location and expectation") {
  try {
    Expr::parse("(1+");
    FAIL("expected SyntaxError");
  } catch (const ifd::SyntaxError& e) {
    CHECK(e.offset() == 3);
    CHECK(std::string(e.what()).find("byte 3") != std::string::npos);
  }
}
