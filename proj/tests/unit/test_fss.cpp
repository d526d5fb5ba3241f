#include <cmath>

#include <gtest/gtest.h>

#include "sladm/fundamental_system.hpp"

using namespace sladm;
using fss::FssAtlas;
using localscale::LocalScale;
using realline::parse_function;

namespace {

LocalScale scale_of(const char* q) {
  return LocalScale(localscale::expression_potential(parse_function(q)));
}

const double kSqrtPi = std::sqrt(M_PI);

// q = 1 + x^2, normalized at 0: u = c e^{x^2/2} sqrt(pi/2) erfc(x), c^2 = 1/(2 sqrt(pi)).
double quadratic_u(double x) {
  const double c = 1 / std::sqrt(2 * kSqrtPi);
  return c * std::exp(x * x / 2) * std::sqrt(M_PI / 2) * std::erfc(x);
}
double quadratic_rho(double x) {
  return kSqrtPi / 4 * std::exp(x * x) * std::erfc(x) * std::erfc(-x);
}

// (G f)(x) for q = 1 and f = exp(-x^2).
double constant_green_gauss(double x) {
  return kSqrtPi / 4 * std::exp(0.25) *
         (std::exp(-x) * std::erfc(0.5 - x) + std::exp(x) * std::erfc(0.5 + x));
}

}  // namespace

TEST(Fss, ConstantPotentialClosedForm) {
  const auto s = scale_of("1");
  const auto fs = fss::build_window(s, -10, 10);
  EXPECT_NEAR(fs.x0(), 0.0, 1e-12);
  for (double x : {-8.0, -1.0, 0.0, 2.0, 9.0}) {
    EXPECT_NEAR(fs.u(x) / (std::exp(-x) / std::sqrt(2.0)), 1.0, 1e-8) << x;
    EXPECT_NEAR(fs.v(x) / (std::exp(x) / std::sqrt(2.0)), 1.0, 1e-8) << x;
    EXPECT_NEAR(fs.rho(x), 0.5, 1e-8) << x;
    EXPECT_NEAR(fs.wronskian_defect(x), 0.0, 1e-8) << x;
    EXPECT_NEAR(fs.green(x, x + 1.5), std::exp(-1.5) / 2, 1e-8) << x;
  }
}

TEST(Fss, QuadraticAgainstErfc) {
  const auto s = scale_of("1 + x^2");
  const auto fs = fss::build_window(s, -6, 6, {}, 0.0);
  for (double x : {-4.0, -1.5, 0.0, 0.7, 3.0, 5.0}) {
    EXPECT_NEAR(fs.rho(x) / quadratic_rho(x), 1.0, 1e-7) << x;
    EXPECT_NEAR(fs.u(x) / quadratic_u(x), 1.0, 1e-7) << x;
    EXPECT_NEAR(fs.v(x) / quadratic_u(-x), 1.0, 1e-7) << x;
  }
  EXPECT_NEAR(fs.rho(0), kSqrtPi / 4, 1e-9);
}

TEST(Fss, BuildFssResidual) {
  const auto s = scale_of("1 + x^2");
  const auto fs = fss::build_fss(s, 12, 241);
  EXPECT_EQ(fs.grid().size(), 241u);
  EXPECT_LT(fs.wronskian_residual(), 1e-8);
  EXPECT_NEAR(fs.normalized_at(), 0.0, 1e-15);
  EXPECT_LT(fss::davies_harrell_check(fs, -10, 10), 1e-6);
}

TEST(Fss, DaviesHarrellOnExample6) {
  LocalScale s(localscale::example6_potential());
  const auto fs = fss::build_window(s, -15, 15);
  EXPECT_LT(fss::davies_harrell_check(fs, -12, 12), 1e-6);
}

TEST(Fss, GreenIsPositiveWithDiagonalRho) {
  const auto s = scale_of("2 + sin(x)");
  const auto fs = fss::build_window(s, -20, 20);
  for (double x : {-15.0, 0.0, 4.0}) {
    EXPECT_NEAR(fs.green(x, x), fs.rho(x), 1e-12 * fs.rho(x));
    for (double t : {-10.0, 1.0, 12.0}) {
      EXPECT_GT(fs.green(x, t), 0.0);
      EXPECT_EQ(fs.green(x, t), fs.green(t, x));
    }
  }
}

TEST(Fss, StructureAndEquivalence) {
  const auto probes = realline::default_probes(6);
  for (const char* q : {"1", "1 + x^2", "2 + sin(x)"}) {
    const auto s = scale_of(q);
    FssAtlas atlas(s);
    const auto st = fss::check_structure(atlas, probes);
    EXPECT_EQ(st.violations, 0) << q;
    EXPECT_GE(st.min_rho_over_d, 1 / (2 * std::sqrt(2.0)) - 1e-9) << q;
    EXPECT_LE(st.max_rho_over_d, std::sqrt(2.0) + 1e-9) << q;
    const auto eq = fss::local_equivalence_check(atlas, probes);
    EXPECT_EQ(eq.violations, 0) << q;
  }
}

TEST(Fss, AtlasReusesWindows) {
  const auto s = scale_of("1 + x^2");
  FssAtlas atlas(s);
  const auto a = atlas.covering(-1, 1);
  const auto b = atlas.around(0.5);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(atlas.size(), 1u);
  // Local quantities agree between windows.
  const auto far = atlas.covering(30, 31);
  const auto wide = fss::build_window(s, -5, 35);
  EXPECT_NEAR(far->rho(30.5) / wide.rho(30.5), 1.0, 1e-8);
}

TEST(Green, ConstantPotentialGaussian) {
  const auto s = scale_of("1");
  const auto fs = fss::build_window(s, -12, 12);
  auto one = [](double) { return 1.0; };
  auto f = [](double x) { return std::exp(-x * x); };
  const auto sol = fss::apply_green(fs, f, 2.0, one, one, s.potential());
  ASSERT_EQ(sol.grid.size(), 401u);
  for (std::size_t i = 0; i < sol.grid.size(); i += 20) {
    EXPECT_NEAR(sol.y[i], constant_green_gauss(sol.grid[i]), 1e-9) << sol.grid[i];
    EXPECT_GE(sol.y[i], 0.0);
  }
  EXPECT_LT(sol.residual_sup, 1e-5);
  EXPECT_NEAR(sol.f_norm.value, std::pow(M_PI / 2, 0.25), 1e-8);
  EXPECT_EQ(sol.f_norm.verdict, realline::Verdict::converged);
  // ||y||_2 by Simpson on the closed form.
  const int n = 20000;
  const double L = 40, h = 2 * L / n;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    acc += w * std::pow(constant_green_gauss(-L + i * h), 2);
  }
  EXPECT_NEAR(sol.y_norm.value, std::sqrt(acc * h / 3), 1e-6);
  EXPECT_LE(sol.ratio, 1.0);
}

TEST(Green, NonnegativeForNonnegativeData) {
  const auto s = scale_of("1 + x^2");
  const auto fs = fss::build_window(s, -8, 8);
  auto one = [](double) { return 1.0; };
  auto f = [](double x) { return x > 0 && x < 2 ? 1.0 : 0.0; };
  const auto sol = fss::apply_green(fs, f, 2.0, one, one, s.potential());
  for (double y : sol.y) EXPECT_GE(y, 0.0);
}

TEST(Green, Profile) {
  const auto s = scale_of("1");
  const auto fs = fss::build_fss(s, 10, 11);
  const auto csv = fss::fss_profile(fs);
  EXPECT_EQ(csv.rows(), 11u);
}
