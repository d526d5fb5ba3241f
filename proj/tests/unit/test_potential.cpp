#include <cmath>

#include <gtest/gtest.h>

#include "sladm/potential.hpp"

using namespace sladm;
using localscale::expression_potential;
using realline::parse_function;

namespace {

double simpson(const realline::ScalarFn& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// int_a^b xi^k cos(e^xi)/sqrt(1+xi^2), 0 <= a < b, via u = e^xi.
double exp_cosine_reference(double a, double b, int k) {
  auto g = [k](double u) {
    const double t = std::log(u);
    return std::pow(t, k) * std::cos(u) / (u * std::sqrt(1 + t * t));
  };
  const double span = std::exp(b) - std::exp(a);
  const int n = 2 * static_cast<int>(std::max(2000.0, 80.0 * span));
  return simpson(g, std::exp(a), std::exp(b), n);
}

}  // namespace

TEST(Potential, QuadraticClosedForms) {
  const auto q = expression_potential(parse_function("1 + x^2"));
  EXPECT_NEAR(q->integral(-1, 2), 3 + (8 + 1) / 3.0, 1e-12);
  for (double x : {0.0, 1.5, -3.0}) {
    for (double T : {0.25, 1.0, 2.0}) {
      EXPECT_NEAR(q->triangle(x, T), T * T * (1 + x * x) + std::pow(T, 4) / 6, 1e-11);
    }
  }
  EXPECT_DOUBLE_EQ(q->value(2.0), 5.0);
  EXPECT_EQ(q->decomposition(), nullptr);
}

TEST(Potential, SplitMatchesExpression) {
  const auto split = localscale::split_potential(parse_function("1 + x^2"), parse_function("2"),
                                                 parse_function("sin(x)"));
  const auto whole = expression_potential(parse_function("1 + x^2 + sin(x)"));
  for (double x : {-2.0, 0.0, 3.0}) {
    EXPECT_NEAR(split->value(x), whole->value(x), 1e-14);
    EXPECT_NEAR(split->integral(x, x + 1.3), whole->integral(x, x + 1.3), 1e-11);
    EXPECT_NEAR(split->triangle(x, 0.9), whole->triangle(x, 0.9), 1e-11);
  }
  ASSERT_NE(split->decomposition(), nullptr);
}

TEST(ExpCosinePart, IntegralsInsideTable) {
  const auto part = localscale::exp_cosine_part();
  for (auto [a, b] : {std::pair{0.0, 1.0}, {2.0, 4.0}, {5.0, 6.5}}) {
    EXPECT_NEAR(part->integral(a, b), exp_cosine_reference(a, b, 0), 1e-9) << a;
    EXPECT_NEAR(part->moment(a, b), exp_cosine_reference(a, b, 1), 1e-9) << a;
  }
}

TEST(ExpCosinePart, IntegralsAcrossAndBeyondCutoff) {
  const auto part = localscale::exp_cosine_part();
  for (auto [a, b] : {std::pair{9.5, 10.5}, {10.5, 11.5}}) {
    const double ref = exp_cosine_reference(a, b, 0);
    EXPECT_NEAR(part->integral(a, b), ref, 1e-10) << a;
    EXPECT_NEAR(part->moment(a, b), exp_cosine_reference(a, b, 1), 1e-9) << a;
  }
  EXPECT_EQ(part->value(11.0), 0.0);
  EXPECT_FALSE(part->description().empty());
}

TEST(ExpCosinePart, EvenSymmetry) {
  const auto part = localscale::exp_cosine_part();
  EXPECT_NEAR(part->integral(-3.0, -1.0), part->integral(1.0, 3.0), 1e-13);
  EXPECT_NEAR(part->moment(-3.0, -1.0), -part->moment(1.0, 3.0), 1e-13);
  EXPECT_NEAR(part->integral(-12.0, -11.0), part->integral(11.0, 12.0), 1e-15);
}

TEST(Example6Potential, Value) {
  const auto q = localscale::example6_potential();
  EXPECT_NEAR(q->value(0.0), 1 + std::cos(1.0), 1e-14);
  ASSERT_NE(q->decomposition(), nullptr);
  EXPECT_NEAR(q->decomposition()->q1(3.0), 1 / std::sqrt(10.0), 1e-15);
}
