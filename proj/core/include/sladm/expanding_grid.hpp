#pragma once

#include <string_view>
#include <vector>

#include "sladm/expression.hpp"

namespace sladm::realline {

enum class Trend { bounded, growing, inconclusive };
enum class Grade { pass, fail, inconclusive };

std::string_view to_string(Trend t) noexcept;
std::string_view to_string(Grade g) noexcept;

/// Shells are {0} and the annuli (2^(k-1), 2^k] for k = 0..max_exponent,
/// sampled at `points_per_shell` log-spaced radii on both sides of 0.
struct GridConfig {
  int max_exponent = 20;
  int points_per_shell = 1;
  bool symmetric = true;  // false: nonnegative half-line only
  int window = 4;         // trailing shells used for trend grading
  double grow_tol = 0.02;
  double bound_tol = 0.01;
  bool refine_argmax = true;
  std::vector<double> extra_points;
};

struct Shell {
  double radius = 0.0;
  double shell_max = 0.0;    // max of f over this shell's samples
  double running_max = 0.0;  // max over all samples with |x| <= radius
  double argmax = 0.0;       // abscissa of shell_max
};

struct GridSup {
  double estimate = 0.0;
  double argmax = 0.0;
  Trend trend = Trend::inconclusive;
  std::vector<Shell> shells;
};

/// Running supremum of f over the expanding grid with trend grading.
///
/// The trend looks at the relative growth of the running max across the last
/// `window` shells: growing when every step grows by at least grow_tol (or
/// the value is infinite), bounded when none grows by more than bound_tol.
/// Infinite samples are allowed and make the trend growing.
GridSup sup_on_expanding_grid(const ScalarFn& f, const GridConfig& cfg = {});

/// Infimum of a positive f, computed as the supremum of 1/f. The trend
/// refers to 1/f: `growing` means the infimum tends to zero.
GridSup inf_on_expanding_grid(const ScalarFn& f, const GridConfig& cfg = {});

/// Grades lim_{|x|->inf} f = 0 from the per-shell maxima of |f|: pass when
/// the last `window` shells all stay below tol, fail when they all exceed it.
Grade grade_limit_zero(const GridSup& abs_profile, double tol, int window = 4);

/// Probe abscissae of the default schedule {0, +-1, +-2, ..., +-2^max_exponent}.
std::vector<double> default_probes(int max_exponent = 20, bool symmetric = true);

}  // namespace sladm::realline
