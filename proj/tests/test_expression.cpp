#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fpcert/expression.hpp"

using namespace fpcert;

namespace {

double eval1(const std::string& text, double x) {
  const auto map = make_expression_map(text, make_interval_space(-1e6, 1e6));
  return map({x})[0];
}

}  // namespace

TEST_CASE("expressions evaluate with ordinary precedence") {
  CHECK(eval1("x1/2", 3.0) == 1.5);
  CHECK(eval1("x1 + 1/x1", 2.0) == 2.5);
  CHECK(eval1("2+3*4", 0.0) == 14.0);
  CHECK(eval1("(2+3)*4", 0.0) == 20.0);
  CHECK(eval1("2-3-4", 0.0) == -5.0);
  CHECK(eval1("16/4/2", 0.0) == 2.0);
  CHECK(eval1("-x1*x1", 3.0) == -9.0);
  CHECK(eval1("2--3", 0.0) == 5.0);
  CHECK(eval1("cos(x1)", 0.0) == 1.0);
  CHECK(eval1("abs(-3)", 0.0) == 3.0);
  CHECK(eval1("sqrt(x1)", 9.0) == 3.0);
  CHECK(eval1("exp(0)", 0.0) == 1.0);
  CHECK(eval1("log(x1)", 1.0) == 0.0);
  CHECK(eval1("sin(0)", 0.0) == 0.0);
  CHECK(eval1("min(x1, 2)", 5.0) == 2.0);
  CHECK(eval1("max(x1, 2)", 5.0) == 5.0);
  CHECK(eval1("1.5e2", 0.0) == 150.0);
}

TEST_CASE("expression evaluation matches the equivalent lambda bit for bit") {
  const auto space = make_interval_space(1.0, 100.0);
  const auto map = make_expression_map("x1/2 + 1/x1", space);
  for (double x : {1.0, 1.5, 2.0, 3.7, 50.0, 99.9}) {
    const double direct = x / 2 + 1 / x;
    CHECK(map({x})[0] == direct);
  }
}

TEST_CASE("each coordinate gets its own part") {
  const auto space = make_box_space(2, -10.0, 10.0, Euclidean{});
  const auto map = make_expression_map("x2; x1 + 1", space);
  const Point out = map({3.0, 5.0});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == 5.0);
  CHECK(out[1] == 4.0);
}

TEST_CASE("parse errors carry one-based positions") {
  const auto expect_error = [](const std::string& text, std::size_t dimension,
                               std::size_t position) {
    try {
      expr::parse_expression(text, dimension);
      FAIL("expected a parse error for: " << text);
    } catch (const ExpressionError& e) {
      INFO(text << " -> " << e.what());
      CHECK(e.position == position);
    }
  };

  expect_error("x1 +", 1, 5);
  expect_error("", 1, 1);
  expect_error("x1)", 1, 3);
  expect_error("(x1", 1, 4);
  expect_error("x0", 1, 1);
  expect_error("x2", 1, 1);
  expect_error("foo(x1)", 1, 1);
  expect_error("min(x1)", 1, 7);
  expect_error("x1; x1", 1, 7);
  expect_error("x1", 2, 3);
}

TEST_CASE("error text names the problem") {
  try {
    expr::parse_expression("x1 +", 1);
    FAIL("expected a parse error");
  } catch (const ExpressionError& e) {
    CHECK(std::string(e.what()).find("position 5") != std::string::npos);
  }
  try {
    expr::parse_expression("x3", 2);
    FAIL("expected a parse error");
  } catch (const ExpressionError& e) {
    CHECK(std::string(e.what()).find("exceeds") != std::string::npos);
  }
}

TEST_CASE("expression maps default their name to the source text") {
  const auto map = make_expression_map("x1/2", make_interval_space(0.0, 1.0));
  CHECK(map.name == "x1/2");
  const auto named =
      make_expression_map("x1/2", make_interval_space(0.0, 1.0), "halver");
  CHECK(named.name == "halver");
}
