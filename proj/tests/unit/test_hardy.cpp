#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "sladm/error.hpp"
#include "sladm/hardy.hpp"

using namespace sladm;
using namespace sladm::hardy;
using realline::parse_function;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

HardyWeights two_sided_exp(double p = 2.0) {
  auto w = [](double t) { return std::exp(-std::fabs(t)); };
  return {w, w, p};
}

HardyWeights constant_weights(double p) {
  auto one = [](double) { return 1.0; };
  return {one, one, p};
}

// H_2 for mu = theta = e^-|t|: sqrt((1 - y) y) with y = e^{-2|x|}/2.
double exp_h2(double x) {
  const double y = std::exp(-2 * std::fabs(x)) / 2;
  return std::sqrt((1 - y) * y);
}

}  // namespace

TEST(Hardy, Constants) {
  EXPECT_DOUBLE_EQ(hardy_constant(1.0), 1.0);
  EXPECT_NEAR(hardy_constant(2.0), 2.0, 1e-15);
  EXPECT_NEAR(hardy_constant(3.0), std::cbrt(3.0) * std::pow(1.5, 2.0 / 3), 1e-14);
  EXPECT_EQ(HardyWeights{}.p_prime(), 2.0);
  EXPECT_EQ(constant_weights(1.0).p_prime(), kInf);
}

TEST(Hardy, ExponentialWeightsClosedForm) {
  const auto w = two_sided_exp();
  EXPECT_NEAR(Hp_at(0.0, w), 0.5, 1e-9);
  EXPECT_NEAR(Hp_tilde_at(0.0, w), 0.5, 1e-9);
  for (double x : {-3.0, -0.5, 1.0, 6.0}) {
    EXPECT_NEAR(Hp_at(x, w), exp_h2(x), 1e-9 * (1 + exp_h2(x))) << x;
    EXPECT_NEAR(Hp_tilde_at(-x, w), Hp_at(x, w), 1e-9) << x;
  }
}

TEST(Hardy, DivergentFactorsGiveInfinity) {
  HardyWeights w{[](double) { return 1.0; }, [](double t) { return std::exp(-t); }, 2.0};
  EXPECT_EQ(Hp_at(0.0, w), kInf);
  HardyWeights wt{[](double t) { return std::exp(-std::fabs(t)); }, [](double) { return 1.0; },
                  2.0};
  EXPECT_EQ(Hp_tilde_at(0.0, wt), kInf);
}

TEST(Hardy, NormBounds) {
  HardyConfig cfg;
  cfg.grid.max_exponent = 8;
  const auto b = hardy_norm_bounds(two_sided_exp(), false, cfg);
  EXPECT_NEAR(b.bound.lower, 0.5, 1e-8);
  EXPECT_NEAR(b.bound.upper, 1.0, 2e-8);
  EXPECT_NEAR(b.sup.argmax, 0.0, 1e-3);
  EXPECT_NE(b.sup.trend, realline::Trend::growing);

  const auto unb = hardy_norm_bounds(constant_weights(2.0), false, cfg);
  EXPECT_EQ(unb.bound.upper, kInf);
}

TEST(Hardy, PreconditionsAreChecked) {
  EXPECT_THROW(Hp_at(0.0, constant_weights(1.0)), PreconditionError);
  HardyWeights bad{[](double t) { return t; }, [](double) { return 1.0; }, 2.0};
  EXPECT_THROW(validate_weights(bad, {-1.0, 0.0, 1.0}), PreconditionError);
  EXPECT_NO_THROW(validate_weights(two_sided_exp(), {-1.0, 0.0, 1.0}));
}

TEST(KernelNorm, ClosedForms) {
  const double inf = kInf;
  auto k = [](double s, double t) { return std::exp(-std::fabs(s - t)); };
  HardyConfig cfg;
  cfg.grid.max_exponent = 8;
  EXPECT_NEAR(kernel_L1_norm(k, -inf, inf, cfg).estimate, 2.0, 1e-8);
  EXPECT_EQ(kernel_L1_norm([](double, double) { return 0.0; }, -inf, inf, cfg).estimate, 0.0);
  // On [0, 1] the column mass peaks at s = 1/2: 2 (1 - e^{-1/2}).
  EXPECT_NEAR(kernel_L1_norm(k, 0.0, 1.0, cfg, 101).estimate, 2 * (1 - std::exp(-0.5)), 1e-8);
}

TEST(Mp, ConstantPotentialQuarter) {
  localscale::LocalScale s(localscale::expression_potential(parse_function("1")));
  fss::FssAtlas atlas(s);
  const auto w = constant_weights(2.0);
  EXPECT_NEAR(Mp_at(0.0, atlas, w), 0.25, 1e-8);
  EXPECT_NEAR(Mp_tilde_at(0.0, atlas, w), 0.25, 1e-8);
  EXPECT_NEAR(Mp_at(7.0, atlas, w), 0.25, 1e-8);
  EXPECT_NEAR(s_column_L1(3.0, atlas, constant_weights(1.0)), 1.0, 1e-8);
}

TEST(SBounds, ConstantPotential) {
  localscale::LocalScale s(localscale::expression_potential(parse_function("1")));
  fss::FssAtlas atlas(s);
  HardyConfig cfg;
  cfg.grid.max_exponent = 8;
  const auto one = s_operator_bounds(atlas, constant_weights(1.0), cfg);
  EXPECT_NEAR(one.bound.lower, 1.0, 1e-7);
  EXPECT_NEAR(one.bound.upper, 1.0, 1e-7);
  const auto two = s_operator_bounds(atlas, constant_weights(2.0), cfg);
  EXPECT_LE(two.bound.lower, 1.0);
  EXPECT_GE(two.bound.upper, 1.0);
  EXPECT_NEAR(two.bound.lower, 0.25, 1e-7);
}

TEST(Empirical, IdentityAndZero) {
  const auto op = discretize([](double, double) { return 0.0; }, 10.0, 64);
  EXPECT_EQ(op.size(), 64u);
  EXPECT_EQ(empirical_operator_norm(op, 2.0).value, 0.0);
  const auto id = identity_operator(op.nodes, op.weights);
  for (double p : {1.0, 2.0, 3.5}) {
    const double n = empirical_operator_norm(id, p).value;
    EXPECT_LE(n, 1.0 + 1e-12) << p;
    EXPECT_GE(n, 1.0 - 1e-9) << p;
  }
}

TEST(Empirical, MatchesColumnMassForP1) {
  auto k = [](double s, double t) { return std::exp(-std::fabs(s - t)) * (1 + 0.5 * std::sin(t)); };
  const auto op = discretize(k, 30.0, 400, 2.0);
  // The l1 operator norm of the discrete map is its largest weighted column sum.
  double col_max = 0;
  for (std::size_t j = 0; j < op.size(); ++j) {
    double c = 0;
    for (std::size_t i = 0; i < op.size(); ++i) {
      c += op.weights[i] * std::fabs(op.matrix[i * op.size() + j]);
    }
    col_max = std::max(col_max, c);
  }
  EXPECT_NEAR(empirical_operator_norm(op, 1.0).value / col_max, 1.0, 0.02);
}

TEST(Empirical, NeverExceedsHardyUpperBound) {
  const auto w = two_sided_exp();
  auto k = [&](double s, double t) { return t > s ? w.mu(s) * w.theta(t) : 0.0; };
  const auto op = discretize(k, 20.0, 300);
  EmpiricalConfig ec;
  ec.seed = 7;
  const double n = empirical_operator_norm(op, 2.0, ec).value;
  EXPECT_GE(n, 0.5 * 0.95);
  EXPECT_LE(n, 1.0);
}
