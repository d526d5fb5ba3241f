#include "sladm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sladm/error.hpp"

namespace sladm::realline {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::converged:
      return "converged";
    case Verdict::divergent:
      return "divergent";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
using G10 = boost::math::quadrature::gauss<double, 10>;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const ScalarFn& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw EvaluationError("integrand is not finite", x);
  return y;
}

// One Gauss-Kronrod panel with the QUADPACK error heuristic.
Segment panel(const ScalarFn& f, double a, double b) {
  static const auto& nodes = GK::abscissa();
  static const auto& kw = GK::weights();
  static const auto& gw = G10::weights();

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  const double fc = checked(f, c);
  double kronrod = fc * kw[0];
  double gauss = 0.0;  // the 10-point Gauss rule has no centre node
  double resabs = std::fabs(kronrod);
  std::array<double, 11> f1{}, f2{};
  f1[0] = f2[0] = fc;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double lo = checked(f, c - h * nodes[i]);
    const double hi = checked(f, c + h * nodes[i]);
    f1[i] = lo;
    f2[i] = hi;
    kronrod += kw[i] * (lo + hi);
    resabs += kw[i] * (std::fabs(lo) + std::fabs(hi));
    if (i % 2 == 1) gauss += gw[i / 2] * (lo + hi);
  }
  const double mean = 0.5 * kronrod;
  double resasc = kw[0] * std::fabs(fc - mean);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    resasc += kw[i] * (std::fabs(f1[i] - mean) + std::fabs(f2[i] - mean));
  }

  kronrod *= h;
  resabs *= std::fabs(h);
  resasc *= std::fabs(h);
  double err = std::fabs((kronrod - gauss * h));
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, kronrod, err};
}

}  // namespace

IntegralResult integrate(const ScalarFn& f, double a, double b,
                         const QuadratureConfig& cfg) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw PreconditionError("integrate: need finite a <= b");
  }
  if (a == b) return {0.0, 0.0, Verdict::converged};

  std::priority_queue<Segment> heap;
  Segment first = panel(f, a, b);
  double value = first.value;
  double error = first.error;
  heap.push(first);

  auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(value)); };

  int subdivisions = 1;
  while (error > target()) {
    if (subdivisions >= cfg.max_subdivisions) {
      return {value, error, Verdict::inconclusive};
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // The worst panel cannot be split further in double precision.
      return {value, error, Verdict::inconclusive};
    }
    heap.pop();
    Segment left = panel(f, worst.a, mid);
    Segment right = panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    // Recompute the running error now and then to shed accumulated rounding.
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      double v = 0.0, e = 0.0;
      while (!copy.empty()) {
        v += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      value = v;
      error = e;
    }
  }
  return {value, error, Verdict::converged};
}

namespace {

// [a, b] split at 0 and at +-2^k, so that a feature near the origin of the
// real line is never hidden inside one wide panel.
IntegralResult integrate_dyadic(const ScalarFn& f, double a, double b, const QuadratureConfig& cfg) {
  std::vector<double> cuts{a};
  if (a < 0.0 && b > 0.0) cuts.push_back(0.0);
  for (double m = 1.0; m < std::max(std::fabs(a), std::fabs(b)); m *= 2.0) {
    if (a < -m && -m < b) cuts.push_back(-m);
    if (a < m && m < b) cuts.push_back(m);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  IntegralResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const IntegralResult r = integrate(f, cuts[i], cuts[i + 1], cfg);
    out.value += r.value;
    out.est_error += r.est_error;
    if (r.verdict != Verdict::converged) out.verdict = r.verdict;
  }
  return out;
}

IntegralResult one_tail(const ScalarFn& f, double origin, double direction,
                        const QuadratureConfig& cfg) {
  auto at = [&](double r) { return origin + direction * r; };
  auto piece = [&](double r0, double r1) {
    const double a = std::min(at(r0), at(r1));
    const double b = std::max(at(r0), at(r1));
    return integrate_dyadic(f, a, b, cfg);
  };

  IntegralResult head = piece(0.0, 1.0);
  double total = head.value;
  double error = head.est_error;
  bool inexact = head.verdict != Verdict::converged;

  // Shells narrower than |origin| grow with r whatever the decay, and heading
  // towards 0 the integrand may still be approaching its bulk: no decision is
  // taken before the shells have passed the mirror of the origin.
  const double settle = 2.0 * std::fabs(origin);

  std::vector<double> increments;
  for (double r = 1.0; r < cfg.truncation_radius; r *= 2.0) {
    IntegralResult shell = piece(r, 2.0 * r);
    total += shell.value;
    error += shell.est_error;
    inexact = inexact || shell.verdict != Verdict::converged;
    increments.push_back(shell.value);
    if (r < settle) continue;

    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
    const std::size_t n = increments.size();
    if (n >= 2 && std::fabs(increments[n - 1]) <= tol &&
        std::fabs(increments[n - 2]) <= tol) {
      return {total, error + std::fabs(increments[n - 1]),
              inexact ? Verdict::inconclusive : Verdict::converged};
    }
    if (n < 4) continue;

    // Ratios of the last three consecutive increments.
    bool same_sign = true;
    double worst_ratio = 0.0, best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = n - 3; k < n; ++k) {
      const double prev = increments[k - 1];
      const double cur = increments[k];
      if (prev == 0.0 || (prev > 0) != (cur > 0)) {
        same_sign = false;
        break;
      }
      const double ratio = cur / prev;
      worst_ratio = std::max(worst_ratio, ratio);
      best_ratio = std::min(best_ratio, ratio);
    }
    if (!same_sign) continue;
    if (best_ratio >= 1.0 - cfg.tail_growth_threshold) {
      return {total, std::numeric_limits<double>::infinity(),
              Verdict::divergent};
    }
    if (worst_ratio < 1.0 - cfg.tail_growth_threshold) {
      // Geometric tails from the extreme ratios bracket the remainder.
      const double last = increments[n - 1];
      const double tail_hi = last * worst_ratio / (1.0 - worst_ratio);
      const double tail_lo = last * best_ratio / (1.0 - best_ratio);
      if (std::fabs(tail_hi) <= tol || std::fabs(tail_hi - tail_lo) <= tol) {
        const double tail = 0.5 * (tail_hi + tail_lo);
        return {total + tail, error + std::fabs(tail_hi - tail_lo),
                inexact ? Verdict::inconclusive : Verdict::converged};
      }
    }
  }
  return {total, error, Verdict::inconclusive};
}

}  // namespace

IntegralResult integrate_improper(const ScalarFn& f, Side side,
                                  const QuadratureConfig& cfg, double origin) {
  switch (side) {
    case Side::right_tail:
      return one_tail(f, origin, +1.0, cfg);
    case Side::left_tail:
      return one_tail(f, origin, -1.0, cfg);
    case Side::both:
      break;
  }
  const IntegralResult left = one_tail(f, origin, -1.0, cfg);
  const IntegralResult right = one_tail(f, origin, +1.0, cfg);
  IntegralResult out{left.value + right.value, left.est_error + right.est_error,
                     Verdict::converged};
  if (left.verdict == Verdict::divergent || right.verdict == Verdict::divergent) {
    out.verdict = Verdict::divergent;
    out.est_error = std::numeric_limits<double>::infinity();
  } else if (left.verdict == Verdict::inconclusive ||
             right.verdict == Verdict::inconclusive) {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

double verify_mean_identity(const ScalarFn& f, const ScalarFn& f2, double x,
                            double t, const QuadratureConfig& cfg) {
  if (t < 0) throw PreconditionError("verify_mean_identity: t must be >= 0");
  const double lhs = integrate(f, x - t, x + t, cfg).value;
  auto inner = [&](double s) {
    return (t - s) * integrate(f2, x - s, x + s, cfg).value;
  };
  const double rhs = 2.0 * f(x) * t + integrate(inner, 0.0, t, cfg).value;
  return std::fabs(lhs - rhs);
}

}  // namespace sladm::realline
