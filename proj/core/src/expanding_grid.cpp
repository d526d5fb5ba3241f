#include "sladm/expanding_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace sladm::realline {

std::string_view to_string(Trend t) noexcept {
  switch (t) {
    case Trend::bounded:
      return "bounded";
    case Trend::growing:
      return "growing";
    case Trend::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(Grade g) noexcept {
  switch (g) {
    case Grade::pass:
      return "pass";
    case Grade::fail:
      return "fail";
    case Grade::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> default_probes(int max_exponent, bool symmetric) {
  std::vector<double> xs{0.0};
  for (int k = 0; k <= max_exponent; ++k) {
    const double r = std::ldexp(1.0, k);
    xs.push_back(r);
    if (symmetric) xs.push_back(-r);
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Trend grade_trend(const std::vector<Shell>& shells, const GridConfig& cfg) {
  const int n = static_cast<int>(shells.size());
  if (n < 2) return Trend::inconclusive;
  const int w = std::min(cfg.window, n - 1);
  bool all_grow = true;
  double max_growth = 0.0;
  for (int k = n - w; k < n; ++k) {
    const double prev = shells[k - 1].running_max;
    const double cur = shells[k].running_max;
    double growth;
    if (std::isinf(cur) && cur > 0) {
      growth = kInf;
    } else if (cur == prev) {
      growth = 0.0;
    } else {
      growth = (cur - prev) / std::max(std::fabs(prev), 1e-300);
    }
    all_grow = all_grow && growth >= cfg.grow_tol;
    max_growth = std::max(max_growth, growth);
  }
  if (all_grow) return Trend::growing;
  if (max_growth <= cfg.bound_tol) return Trend::bounded;
  return Trend::inconclusive;
}

}  // namespace

GridSup sup_on_expanding_grid(const ScalarFn& f, const GridConfig& cfg) {
  struct Sample {
    double x;
    double fx;
  };
  std::vector<Sample> samples;
  std::vector<Shell> shells;
  const int m = std::max(1, cfg.points_per_shell);

  double best = -kInf;
  double best_x = 0.0;
  auto take = [&](double x, Shell& shell) {
    const double fx = f(x);
    samples.push_back({x, fx});
    if (fx > shell.shell_max || std::isnan(shell.shell_max)) {
      shell.shell_max = fx;
      shell.argmax = x;
    }
    if (fx > best) {
      best = fx;
      best_x = x;
    }
  };

  std::vector<double> extras = cfg.extra_points;
  std::sort(extras.begin(), extras.end(),
            [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  std::size_t next_extra = 0;

  for (int j = -1; j <= cfg.max_exponent; ++j) {
    const double radius = j < 0 ? 0.0 : std::ldexp(1.0, j);
    Shell shell{radius, -kInf, best, 0.0};
    if (j < 0) {
      take(0.0, shell);
    } else {
      for (int i = m - 1; i >= 0; --i) {
        const double r = radius * std::exp2(-static_cast<double>(i) / m);
        take(r, shell);
        if (cfg.symmetric) take(-r, shell);
      }
    }
    while (next_extra < extras.size() && std::fabs(extras[next_extra]) <= radius) {
      take(extras[next_extra++], shell);
    }
    shell.running_max = best;
    shells.push_back(shell);
  }
  // Extra points beyond the last shell join it.
  while (next_extra < extras.size()) {
    take(extras[next_extra++], shells.back());
    shells.back().running_max = best;
  }

  if (cfg.refine_argmax && std::isfinite(best) && samples.size() >= 3) {
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.x < b.x; });
    auto it = std::find_if(samples.begin(), samples.end(),
                           [&](const Sample& s) { return s.x == best_x; });
    const double lo = it == samples.begin() ? it->x : std::prev(it)->x;
    const double hi = std::next(it) == samples.end() ? it->x : std::next(it)->x;
    if (lo < hi) {
      auto neg = [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? -v : -kInf;
      };
      auto [x_ref, neg_ref] = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
      if (-neg_ref > best) {
        best = -neg_ref;
        best_x = x_ref;
        auto owner = std::find_if(shells.begin(), shells.end(), [&](const Shell& s) {
          return s.radius >= std::fabs(x_ref);
        });
        if (owner != shells.end() && best > owner->shell_max) {
          owner->shell_max = best;
          owner->argmax = x_ref;
        }
        for (auto s = owner; s != shells.end(); ++s) {
          s->running_max = std::max(s->running_max, best);
        }
      }
    }
  }

  GridSup out{best, best_x, grade_trend(shells, cfg), std::move(shells)};
  return out;
}

GridSup inf_on_expanding_grid(const ScalarFn& f, const GridConfig& cfg) {
  auto reciprocal = [&](double x) {
    const double v = f(x);
    return v > 0 ? 1.0 / v : kInf;
  };
  GridSup r = sup_on_expanding_grid(reciprocal, cfg);
  GridSup out = r;
  out.estimate = 1.0 / r.estimate;
  for (auto& s : out.shells) {
    s.shell_max = 1.0 / s.shell_max;
    s.running_max = 1.0 / s.running_max;
  }
  return out;
}

Grade grade_limit_zero(const GridSup& abs_profile, double tol, int window) {
  const auto& shells = abs_profile.shells;
  const int n = static_cast<int>(shells.size());
  if (n == 0) return Grade::inconclusive;
  const int w = std::min(window, n);
  double hi = -kInf, lo = kInf;
  for (int k = n - w; k < n; ++k) {
    hi = std::max(hi, shells[k].shell_max);
    lo = std::min(lo, shells[k].shell_max);
  }
  if (hi <= tol) return Grade::pass;
  if (lo >= tol) return Grade::fail;
  return Grade::inconclusive;
}

}  // namespace sladm::realline
