#include "sladm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

#include "sladm/error.hpp"

namespace sladm::realline {

double find_root_monotone(const ScalarFn& g, double lo, double hi, double tol,
                          double rel_tol) {
  if (!(lo <= hi)) throw BracketError("find_root_monotone: lo > hi");
  const double glo = g(lo);
  const double ghi = g(hi);
  if (!std::isfinite(glo) || !std::isfinite(ghi)) {
    throw EvaluationError("find_root_monotone: non-finite endpoint value",
                          std::isfinite(glo) ? hi : lo);
  }
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (glo > 0.0 || ghi < 0.0) {
    throw BracketError("find_root_monotone: g(lo) <= 0 <= g(hi) violated");
  }

  auto done = [tol, rel_tol](double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(b - a) <= std::max(tol, rel_tol * scale);
  };
  std::uintmax_t max_iter = 500;
  auto [a, b] = boost::math::tools::toms748_solve(
      [&](double x) { return g(x); }, lo, hi, glo, ghi, done, max_iter);
  return 0.5 * (a + b);
}

Bracket grow_bracket_up(const ScalarFn& g, double lo, double start,
                        int max_doublings) {
  double hi = std::max(start, lo);
  if (hi <= 0.0) hi = 1.0;
  for (int i = 0; i <= max_doublings; ++i) {
    if (g(hi) >= 0.0) return {lo, hi};
    lo = hi;
    hi *= 2.0;
  }
  throw BracketError("grow_bracket_up: no sign change within budget");
}

}  // namespace sladm::realline
