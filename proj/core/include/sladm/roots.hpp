#pragma once

#include "sladm/expression.hpp"

namespace sladm::realline {

/// Root of a continuous nondecreasing g with g(lo) <= 0 <= g(hi).
///
/// Bracketing TOMS 748 iteration; stops once the bracket is narrower than
/// max(tol, rel_tol * |root|) and returns its midpoint, or returns an
/// endpoint where g vanishes exactly. Throws BracketError when the endpoint
/// signs do not bracket a root.
double find_root_monotone(const ScalarFn& g, double lo, double hi, double tol,
                          double rel_tol = 0.0);

struct Bracket {
  double lo;
  double hi;
};

/// Grows hi geometrically from `start` (keeping lo fixed) until g(hi) >= 0.
/// Throws BracketError after `max_doublings` attempts.
Bracket grow_bracket_up(const ScalarFn& g, double lo, double start,
                        int max_doublings = 200);

}  // namespace sladm::realline
