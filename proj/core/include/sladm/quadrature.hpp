#pragma once

#include <string_view>

#include "sladm/expression.hpp"

namespace sladm::realline {

enum class Verdict { converged, divergent, inconclusive };

std::string_view to_string(Verdict v) noexcept;

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_subdivisions = 4000;
  // Largest radius reached when doubling towards an infinite endpoint.
  double truncation_radius = 1073741824.0;  // 2^30
  // Consecutive tail increments that shrink by less than this fraction per
  // doubling indicate divergence.
  double tail_growth_threshold = 0.1;
};

struct IntegralResult {
  double value = 0.0;
  double est_error = 0.0;
  Verdict verdict = Verdict::converged;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature of f over [a, b].
///
/// The interval with the largest error estimate is bisected until the total
/// estimate meets max(abs_tol, rel_tol * |value|) or the subdivision budget
/// runs out, in which case the best estimate is returned as inconclusive.
/// Non-finite integrand values raise EvaluationError at the offending node.
IntegralResult integrate(const ScalarFn& f, double a, double b,
                         const QuadratureConfig& cfg = {});

enum class Side { left_tail, right_tail, both };

/// Integral of f over (-inf, origin], [origin, inf) or the whole line.
///
/// Integrates shells [origin + r, origin + 2r] with r doubling from 1 up to
/// cfg.truncation_radius. Shell increments that keep shrinking geometrically
/// are summed with a tail extrapolation; increments that fail to shrink by
/// tail_growth_threshold over three consecutive doublings mark the integral
/// divergent. Neither decision is taken before the shells reach 2 |origin|.
IntegralResult integrate_improper(const ScalarFn& f, Side side,
                                  const QuadratureConfig& cfg = {},
                                  double origin = 0.0);

/// |lhs - rhs| of the mean-value identity
///   int_{x-t}^{x+t} f = 2 f(x) t + int_0^t int_0^{t1} int_{x-t2}^{x+t2} f''
/// with the repeated outer integrals collapsed to int_0^t (t - s) g(s) ds.
double verify_mean_identity(const ScalarFn& f, const ScalarFn& f2, double x,
                            double t, const QuadratureConfig& cfg = {});

}  // namespace sladm::realline
