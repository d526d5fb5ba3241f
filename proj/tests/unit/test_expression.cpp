#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sladm/error.hpp"
#include "sladm/expression.hpp"

using namespace sladm;
using realline::parse_function;

TEST(Expression, Arithmetic) {
  EXPECT_DOUBLE_EQ(parse_function("1 + 2*3")(0.0), 7.0);
  EXPECT_DOUBLE_EQ(parse_function("(1 + 2)*3")(0.0), 9.0);
  EXPECT_DOUBLE_EQ(parse_function("2^3^2")(0.0), 512.0);
  EXPECT_DOUBLE_EQ(parse_function("-x^2")(3.0), -9.0);
  EXPECT_DOUBLE_EQ(parse_function("8/4/2")(0.0), 1.0);
}

TEST(Expression, FunctionsAndConstants) {
  const double x = 0.7;
  EXPECT_DOUBLE_EQ(parse_function("sqrt(1+x^2)")(x), std::sqrt(1 + x * x));
  EXPECT_DOUBLE_EQ(parse_function("log(2+x^2)")(x), std::log(2 + x * x));
  EXPECT_DOUBLE_EQ(parse_function("ln(x)")(x), std::log(x));
  EXPECT_DOUBLE_EQ(parse_function("cos(exp(abs(x)))")(-x), std::cos(std::exp(x)));
  EXPECT_DOUBLE_EQ(parse_function("pow(x, 3)")(x), std::pow(x, 3));
  EXPECT_DOUBLE_EQ(parse_function("max(x, 1) + min(x, 1)")(x), 1.0 + x);
  EXPECT_DOUBLE_EQ(parse_function("pi + e")(0.0), std::numbers::pi + std::numbers::e);
  EXPECT_DOUBLE_EQ(parse_function("tanh(x) + sinh(x) - cosh(x) + atan(x) + tan(x)")(x),
                   std::tanh(x) + std::sinh(x) - std::cosh(x) + std::atan(x) + std::tan(x));
}

TEST(Expression, UnicodeOperators) {
  EXPECT_DOUBLE_EQ(parse_function("6 × x ÷ 2 − 1")(2.0), 5.0);
}

TEST(Expression, RoundTrip) {
  for (const char* src : {"1/(sqrt(1+x^2)*log(2+x^2))", "-x^2 + 3*sin(x)/2", "2^-x"}) {
    const auto f = parse_function(src);
    const auto g = parse_function(f.to_string());
    for (double x : {-2.5, -1.0, 0.3, 4.0}) EXPECT_DOUBLE_EQ(f(x), g(x)) << src;
  }
}

TEST(Expression, Errors) {
  EXPECT_THROW(parse_function("1 +"), ParseError);
  EXPECT_THROW(parse_function("foo(x)"), ParseError);
  EXPECT_THROW(parse_function("y"), ParseError);
  EXPECT_THROW(parse_function("(x"), ParseError);
  EXPECT_THROW(parse_function("1/x")(0.0), EvaluationError);
  EXPECT_TRUE(std::isnan(parse_function("log(x)").eval_unchecked(-1.0)));
}

TEST(Expression, Claims) {
  using realline::Parity;
  using realline::Positivity;
  const auto f = parse_function("1 + x^2").with_claims(Positivity::strictly_positive, Parity::even);
  EXPECT_TRUE(f.check_claims({-3, -1, 0, 2}).empty());
  const auto g = parse_function("x").with_claims(Positivity::strictly_positive, Parity::even);
  EXPECT_FALSE(g.check_claims({-1, 1}).empty());
}

TEST(Expression, ConstantAndZero) {
  EXPECT_DOUBLE_EQ(realline::constant_function(2.5)(100.0), 2.5);
  EXPECT_DOUBLE_EQ(realline::RealFunction()(3.0), 0.0);
  EXPECT_DOUBLE_EQ(parse_function("x^2").as_function()(3.0), 9.0);
}
