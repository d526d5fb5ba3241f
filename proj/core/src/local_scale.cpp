#include "sladm/local_scale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>

#include "sladm/error.hpp"

namespace sladm::localscale {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double default_fd_step(double x) noexcept { return std::max(1e-5, 1e-5 * std::fabs(x)); }

LocalScale::LocalScale(PotentialPtr q, LocalScaleConfig cfg) : q_(std::move(q)), cfg_(cfg) {
  if (!q_) throw PreconditionError("LocalScale: null potential");
}

double LocalScale::F(double x, double eta) const {
  if (eta <= 0.0) return 0.0;
  return q_->triangle(x, std::numbers::sqrt2 * eta);
}

double LocalScale::G(double x, double eta) const {
  if (eta <= 0.0) return 0.0;
  return eta * q_->integral(x - eta, x + eta);
}

double LocalScale::solve(double x, bool hat, Bracket& bracket) const {
  // F and G increase with eta: an overflowing average lies above the root.
  auto g = [&](double eta) {
    try {
      return (hat ? G(x, eta) : F(x, eta)) - 2.0;
    } catch (const EvaluationError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const double qx = q_->value(x);
  const double guess = qx > 0.0 ? 1.0 / std::sqrt(std::max(qx, cfg_.min_q_for_guess)) : 1.0;
  try {
    bracket = realline::grow_bracket_up(g, 0.0, guess, cfg_.max_bracket_doublings);
  } catch (const BracketError&) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s(%.17g): no bracket; q has no mass near x",
                  hat ? "d_hat" : "d", x);
    throw BracketError(buf);
  }
  while (std::isinf(g(bracket.hi))) {
    const double mid = 0.5 * (bracket.lo + bracket.hi);
    if (g(mid) < 0.0) {
      bracket.lo = mid;
    } else {
      bracket.hi = mid;
    }
  }
  return realline::find_root_monotone(g, bracket.lo, bracket.hi, 0.0, cfg_.root_rel_tol);
}

ScaleEntry LocalScale::entry(double x) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(x);
    if (it != cache_.end() && !std::isnan(it->second.d) && !std::isnan(it->second.d_hat)) {
      return it->second;
    }
  }
  (void)d(x);
  (void)d_hat(x);
  std::shared_lock lock(mutex_);
  return cache_.at(x);
}

double LocalScale::d(double x) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(x);
    if (it != cache_.end() && !std::isnan(it->second.d)) return it->second.d;
  }
  Bracket bracket{};
  const double value = solve(x, false, bracket);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.try_emplace(x, ScaleEntry{kNaN, kNaN, {}, {}});
  it->second.d = value;
  it->second.d_bracket = bracket;
  return value;
}

double LocalScale::d_hat(double x) const {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(x);
    if (it != cache_.end() && !std::isnan(it->second.d_hat)) return it->second.d_hat;
  }
  Bracket bracket{};
  const double value = solve(x, true, bracket);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.try_emplace(x, ScaleEntry{kNaN, kNaN, {}, {}});
  it->second.d_hat = value;
  it->second.d_hat_bracket = bracket;
  return value;
}

double LocalScale::q_star(double x) const {
  const double v = d(x);
  return 1.0 / (v * v);
}

double LocalScale::q_hat_star(double x) const {
  const double v = d_hat(x);
  return 1.0 / (v * v);
}

double LocalScale::d_prime(double x, double h) const {
  if (h <= 0.0) h = default_fd_step(x);
  return (d(x + h) - d(x - h)) / (2.0 * h);
}

double LocalScale::nu(double x) const {
  const double dx = d(x);
  const double T = std::numbers::sqrt2 * dx;
  return dx * (q_->integral(x, x + T) - q_->integral(x - T, x));
}

std::size_t LocalScale::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

namespace {

// sup_{t in [0, L]} |I(t)| on n uniform samples, I accumulated slab by slab.
template <class SlabIntegral>
double sampled_sup(const SlabIntegral& slab, double x, double L, int n) {
  double acc = 0.0;
  double best = 0.0;
  double prev_t = 0.0;
  for (int j = 1; j < n; ++j) {
    const double t = L * static_cast<double>(j) / static_cast<double>(n - 1);
    acc += slab(x - t, x - prev_t) + slab(x + prev_t, x + t);
    best = std::max(best, std::fabs(acc));
    prev_t = t;
  }
  return best;
}

template <class SlabIntegral>
KappaResult refine_sup(const SlabIntegral& slab, double x, double L, double scale,
                       int initial_samples) {
  constexpr int kMaxSamples = 65537;
  int n = std::max(3, initial_samples);
  double prev = sampled_sup(slab, x, L, n);
  while (true) {
    const int next = 2 * n - 1;
    const double cur = sampled_sup(slab, x, L, next);
    const bool agree = std::fabs(cur - prev) <= 0.01 * std::fabs(cur) || (cur == 0.0 && prev == 0.0);
    if (agree || next >= kMaxSamples) {
      return {scale * std::max(cur, prev), next, agree};
    }
    prev = cur;
    n = next;
  }
}

}  // namespace

KappaResult kappa1(const Decomposition& parts, double x, int initial_samples) {
  const double q1 = parts.q1(x);
  if (!(q1 > 0.0)) throw PreconditionError("kappa1: q1 must be positive");
  const auto cfg = potential_quadrature();
  auto slab = [&](double a, double b) {
    return realline::integrate([&](double t) { return parts.q1pp(t); }, a, b, cfg).value;
  };
  return refine_sup(slab, x, 2.0 / std::sqrt(q1), std::pow(q1, -1.5), initial_samples);
}

KappaResult kappa2(const Decomposition& parts, double x, int initial_samples) {
  const double q1 = parts.q1(x);
  if (!(q1 > 0.0)) throw PreconditionError("kappa2: q1 must be positive");
  auto slab = [&](double a, double b) { return parts.q2->integral(a, b); };
  return refine_sup(slab, x, 2.0 / std::sqrt(q1), 1.0 / std::sqrt(q1), initial_samples);
}

ClassHReport class_H_check(const LocalScale& scale, const GridConfig& grid, double tol_H) {
  GridConfig cfg = grid;
  cfg.refine_argmax = false;
  GridSup profile = realline::sup_on_expanding_grid(
      [&](double x) { return std::fabs(scale.nu(x)); }, cfg);
  const Grade g = realline::grade_limit_zero(profile, tol_H, cfg.window);
  return {std::move(profile), g, tol_H};
}

AsymptoticReport asymptotic_d_check(const LocalScale& scale, const std::vector<double>& probes,
                                    double slack) {
  const Decomposition* parts = scale.potential().decomposition();
  if (!parts) throw PreconditionError("asymptotic_d_check: potential has no decomposition");
  AsymptoticReport report{{}, std::numeric_limits<double>::infinity(), 0.0, 0};
  for (double x : probes) {
    AsymptoticRow row{};
    row.x = x;
    row.d = scale.d(x);
    row.ratio = row.d * std::sqrt(parts->q1(x));
    row.kappa1 = kappa1(*parts, x).value;
    row.kappa2 = kappa2(*parts, x).value;
    const double delta = 2.0 * (row.kappa1 + row.kappa2);
    row.applicable = delta <= 0.25;
    row.ok = !row.applicable || std::fabs(row.ratio - 1.0) <= delta + slack;
    if (!row.ok) ++report.violations;
    report.ratio_min = std::min(report.ratio_min, row.ratio);
    report.ratio_max = std::max(report.ratio_max, row.ratio);
    report.rows.push_back(row);
  }
  return report;
}

InvariantReport check_scale_invariants(const LocalScale& scale, const std::vector<double>& probes,
                                       int neighbours) {
  InvariantReport r;
  auto fail = [&](const char* what, double x, double value) {
    ++r.violations;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s at x = %.17g (value %.17g)", what, x, value);
    r.witnesses.emplace_back(buf);
  };
  constexpr double kRel = 1e-9;
  for (double x : probes) {
    ++r.probes;
    const double dx = scale.d(x);
    const double dh = scale.d_hat(x);

    ++r.checks;
    const double below = scale.F(x, dx * (1.0 - kRel));
    if (!(below < 2.0)) fail("F >= 2 below d", x, below);
    ++r.checks;
    const double above = scale.F(x, dx * (1.0 + kRel));
    if (!(above > 2.0)) fail("F <= 2 above d", x, above);

    ++r.checks;
    if (!(dh >= dx / std::numbers::sqrt2 * (1.0 - kRel) &&
          dh <= dx * std::numbers::sqrt2 * (1.0 + kRel))) {
      fail("d_hat outside [d/sqrt2, sqrt2 d]", x, dh / dx);
    }

    ++r.checks;
    const double dp = scale.d_prime(x);
    if (!(std::fabs(dp) <= 1.0 / std::numbers::sqrt2 + 1e-3)) fail("|d'| > 1/sqrt2", x, dp);

    for (int k = 0; k <= neighbours; ++k) {
      const double t = x - dx + 2.0 * dx * static_cast<double>(k) / std::max(1, neighbours);
      ++r.checks;
      const double dt = scale.d(t);
      if (!(dt >= dx / 4.0 && dt <= 4.0 * dx)) fail("d(t)/d(x) outside [1/4, 4]", t, dt / dx);
    }
  }
  return r;
}

realline::CsvWriter scale_profile(const LocalScale& scale, const std::vector<double>& xs) {
  const Decomposition* parts = scale.potential().decomposition();
  std::vector<std::string> cols{"x", "d", "d_hat", "q_star", "nu"};
  if (parts) {
    cols.emplace_back("kappa1");
    cols.emplace_back("kappa2");
  }
  realline::CsvWriter csv(cols);
  for (double x : xs) {
    std::vector<double> row{x, scale.d(x), scale.d_hat(x), scale.q_star(x), scale.nu(x)};
    if (parts) {
      row.push_back(kappa1(*parts, x).value);
      row.push_back(kappa2(*parts, x).value);
    }
    csv.add_row(row);
  }
  return csv;
}

}  // namespace sladm::localscale
