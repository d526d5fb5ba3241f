#include <cmath>

#include <gtest/gtest.h>

#include "sladm/error.hpp"

#include "sladm/quadrature.hpp"

using namespace sladm::realline;

namespace {

// Composite Simpson on n panels: an independent reference for smooth integrands.
double simpson(const ScalarFn& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Integrate, Constant) { EXPECT_NEAR(integrate([](double) { return 1.0; }, 0, 2).value, 2.0, 1e-14); }

TEST(Integrate, Exponential) {
  const auto r = integrate([](double t) { return std::exp(-t); }, 0, 50);
  EXPECT_EQ(r.verdict, Verdict::converged);
  EXPECT_NEAR(r.value, -std::expm1(-50.0), 1e-10);
}

TEST(Integrate, CubicsAreExact) {
  const auto p = [](double t) { return 4 * t * t * t - 3 * t * t + t - 7; };
  const auto P = [](double t) { return t * t * t * t - t * t * t + t * t / 2 - 7 * t; };
  for (auto [a, b] : {std::pair{-3.0, 2.0}, {0.5, 0.75}, {10.0, 40.0}}) {
    EXPECT_NEAR(integrate(p, a, b).value, P(b) - P(a), 1e-13 * std::max(1.0, std::fabs(P(b))));
  }
}

TEST(Integrate, OscillatoryCancellation) {
  // In u = e^t the integrand becomes cos(u)/(u sqrt(1 + log(u)^2)), smooth
  // enough for Simpson.
  const double a = 5.0, b = 5.0 + 2.0 * std::pow(26.0, 0.25);
  QuadratureConfig cfg;
  cfg.max_subdivisions = 20000;
  const auto r = integrate([](double t) { return std::cos(std::exp(t)) / std::sqrt(1 + t * t); },
                           a, b, cfg);
  const double ref = simpson(
      [](double u) { return std::cos(u) / (u * std::sqrt(1 + std::log(u) * std::log(u))); },
      std::exp(a), std::exp(b), 2'000'000);
  EXPECT_NEAR(r.value, ref, 1e-9);
  EXPECT_LE(std::fabs(r.value), std::exp(-2.5) / std::sqrt(26.0));
}

TEST(Integrate, NonFiniteIntegrandThrows) {
  EXPECT_THROW(integrate([](double t) { return 1.0 / t; }, -1.0, 1.0 + 1e-3), sladm::EvaluationError);
}

TEST(Improper, TwoSidedExponential) {
  const auto r = integrate_improper([](double t) { return std::exp(-std::fabs(t)); }, Side::both);
  EXPECT_EQ(r.verdict, Verdict::converged);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Improper, LogCorrectedHarmonicDiverges) {
  const auto mu = [](double t) { return 1.0 / (std::sqrt(1 + t * t) * std::log(2 + t * t)); };
  EXPECT_EQ(integrate_improper(mu, Side::right_tail).verdict, Verdict::divergent);
  EXPECT_EQ(integrate_improper(mu, Side::left_tail).verdict, Verdict::divergent);
}

TEST(Improper, Zero) {
  const auto r = integrate_improper([](double) { return 0.0; }, Side::both);
  EXPECT_EQ(r.verdict, Verdict::converged);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Improper, PowerTailFromFarOrigin) {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-300;
  const double x = 524288.0;
  const auto r = integrate_improper([](double t) { return std::pow(1 + t * t, -2.0); },
                                    Side::right_tail, cfg, x);
  EXPECT_EQ(r.verdict, Verdict::converged);
  // int_x^inf (1+t^2)^-2 = 1/(3x^3) (1 + O(x^-2))
  EXPECT_NEAR(r.value * 3 * x * x * x, 1.0, 1e-9);
}

TEST(Improper, NarrowPeakSeenFromFarOrigin) {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-300;
  const auto r = integrate_improper([](double t) { return std::exp(-1.5 * std::fabs(t)); },
                                    Side::left_tail, cfg, 524288.0);
  EXPECT_EQ(r.verdict, Verdict::converged);
  EXPECT_NEAR(r.value, 4.0 / 3.0, 1e-10);
}

TEST(Improper, TrichotomyStableUnderLargerRadius) {
  const std::vector<ScalarFn> fs{[](double t) { return 1.0 / (1 + t * t); },
                                 [](double t) { return 1.0 / std::sqrt(1 + t * t); },
                                 [](double t) { return std::exp(-t * t); }};
  for (const auto& f : fs) {
    QuadratureConfig small, big;
    big.truncation_radius = 2 * small.truncation_radius;
    const auto a = integrate_improper(f, Side::right_tail, small);
    const auto b = integrate_improper(f, Side::right_tail, big);
    EXPECT_FALSE(a.verdict == Verdict::converged && b.verdict == Verdict::divergent);
  }
}

TEST(MeanIdentity, Examples) {
  const auto sq = [](double t) { return t * t; };
  const auto two = [](double) { return 2.0; };
  EXPECT_LE(verify_mean_identity(sq, two, 0.0, 1.0), 1e-13);
  EXPECT_LE(verify_mean_identity([](double t) { return 3 * t - 1; }, [](double) { return 0.0; },
                                 -2.0, 5.0),
            1e-13);
  EXPECT_LE(verify_mean_identity([](double t) { return t * t * t; },
                                 [](double t) { return 6 * t; }, 1.0, 1.0),
            1e-12);
}

TEST(MeanIdentity, QuarticsWithinTenAbsTol) {
  QuadratureConfig cfg;
  for (double c : {-2.0, 0.5, 3.0}) {
    const auto f = [c](double t) { return t * t * t * t + c * t * t * t - t; };
    const auto f2 = [c](double t) { return 12 * t * t + 6 * c * t; };
    EXPECT_LE(verify_mean_identity(f, f2, c, 1.5, cfg), 10 * cfg.abs_tol);
  }
}
