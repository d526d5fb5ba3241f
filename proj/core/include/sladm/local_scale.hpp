#pragma once

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "sladm/expanding_grid.hpp"
#include "sladm/format.hpp"
#include "sladm/potential.hpp"
#include "sladm/roots.hpp"

namespace sladm::localscale {

using realline::Bracket;
using realline::Grade;
using realline::GridConfig;
using realline::GridSup;

struct LocalScaleConfig {
  double root_rel_tol = 1e-12;
  int max_bracket_doublings = 200;
  double min_q_for_guess = 1e-16;
};

struct ScaleEntry {
  double d;
  double d_hat;
  Bracket d_bracket;
  Bracket d_hat_bracket;
};

/// Central-difference step max(1e-5, 1e-5 |x|).
double default_fd_step(double x) noexcept;

/// d(x) solves F(x, eta) = 2 and d^(x) solves eta int_{x-eta}^{x+eta} q = 2.
///
/// Values are memoized per exact abscissa; concurrent use is safe.
class LocalScale {
 public:
  explicit LocalScale(PotentialPtr q, LocalScaleConfig cfg = {});

  /// int_0^{sqrt2 eta} int_{x-t}^{x+t} q
  double F(double x, double eta) const;
  /// eta int_{x-eta}^{x+eta} q
  double G(double x, double eta) const;

  double d(double x) const;
  double d_hat(double x) const;
  double q_star(double x) const;
  double q_hat_star(double x) const;
  /// Central difference of d; h <= 0 selects default_fd_step(x).
  double d_prime(double x, double h = 0.0) const;
  /// d(x) int_0^{sqrt2 d(x)} (q(x+t) - q(x-t)) dt
  double nu(double x) const;

  ScaleEntry entry(double x) const;

  const Potential& potential() const noexcept { return *q_; }
  const PotentialPtr& potential_ptr() const noexcept { return q_; }
  const LocalScaleConfig& config() const noexcept { return cfg_; }
  std::size_t cache_size() const;

 private:
  double solve(double x, bool hat, Bracket& bracket) const;

  PotentialPtr q_;
  LocalScaleConfig cfg_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<double, ScaleEntry> cache_;
};

struct KappaResult {
  double value;
  int samples;
  bool stable;  // consecutive sample doublings agreed to 1%
};

/// q1(x)^(-3/2) sup_{t in A(x)} |int_{x-t}^{x+t} q1''| with A(x) = [0, 2/sqrt(q1(x))].
KappaResult kappa1(const Decomposition& parts, double x, int initial_samples = 257);
/// q1(x)^(-1/2) sup_{t in A(x)} |int_{x-t}^{x+t} q2|.
KappaResult kappa2(const Decomposition& parts, double x, int initial_samples = 257);

struct ClassHReport {
  GridSup abs_nu;
  Grade in_H;
  double tol;
};

/// Grades lim nu(x) = 0 over the expanding grid.
ClassHReport class_H_check(const LocalScale& scale, const GridConfig& grid = {},
                           double tol_H = 0.05);

struct AsymptoticRow {
  double x;
  double d;
  double ratio;  // d sqrt(q1)
  double kappa1;
  double kappa2;
  bool applicable;  // 2(kappa1 + kappa2) small enough for the estimate
  bool ok;
};

struct AsymptoticReport {
  std::vector<AsymptoticRow> rows;
  double ratio_min;
  double ratio_max;
  int violations;
};

/// Checks |d sqrt(q1) - 1| <= 2(kappa1 + kappa2) + slack wherever
/// 2(kappa1 + kappa2) <= 1/4 and records the range of d sqrt(q1).
AsymptoticReport asymptotic_d_check(const LocalScale& scale,
                                    const std::vector<double>& probes,
                                    double slack = 1e-6);

struct InvariantReport {
  int probes = 0;
  int checks = 0;
  int violations = 0;
  std::vector<std::string> witnesses;
};

/// Monotone consistency of F around d, the d/sqrt2 <= d^ <= sqrt2 d sandwich,
/// |d'| <= 1/sqrt2 + 1e-3 and d(x)/4 <= d(t) <= 4 d(x) for |t - x| <= d(x).
InvariantReport check_scale_invariants(const LocalScale& scale,
                                       const std::vector<double>& probes,
                                       int neighbours = 8);

/// Columns x, d, d_hat, q_star, nu and, with a decomposition, kappa1, kappa2.
realline::CsvWriter scale_profile(const LocalScale& scale,
                                  const std::vector<double>& xs);

}  // namespace sladm::localscale
