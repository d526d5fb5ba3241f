#pragma once

#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sladm/format.hpp"
#include "sladm/local_scale.hpp"

namespace sladm::fss {

using localscale::LocalScale;
using realline::ScalarFn;

struct FssConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-11;
  /// Extra int dx/d(x) integrated beyond each end of the requested range so
  /// that the Riccati solutions forget their WKB starting values.
  double pad_phase = 20.0;
  /// Integration steps never exceed this fraction of d(x).
  double max_step_scale = 0.2;
  long max_steps = 20'000'000;
};

/// Dense output of one Riccati solution w = z'/z and l = log z.
///
/// w is the cubic Hermite interpolant of the step nodes and l its exact
/// primitive, so l' = w holds everywhere between nodes.
class RiccatiTrack {
 public:
  /// Appends a node; nodes must arrive in increasing x.
  void push(double x, double w, double dw);
  /// Adds c to l everywhere.
  void shift(double c);

  double ell(double x) const;
  double w(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

 private:
  std::size_t cell(double x) const;
  std::vector<double> x_, ell_, w_, dw_;
};

/// Positive solutions u (decreasing) and v (increasing) of z'' = q z with
/// v'u - u'v = 1, held in log form over a window.
///
/// v is integrated forward from the left end of the window and u backward
/// from the right end, each starting from the WKB slope +-1/d. The requested
/// range [lo, hi] is padded on both sides so that the starting error has
/// decayed by about exp(-2 pad_phase) inside it.
class FundamentalSystem {
 public:
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  /// Range actually integrated, including the pads.
  double window_lo() const noexcept { return a_; }
  double window_hi() const noexcept { return b_; }
  bool covers(double x) const noexcept { return x >= a_ && x <= b_; }

  /// Crossing u(x0) = v(x0); NaN when it lies outside the window.
  double x0() const noexcept { return x0_; }
  double normalized_at() const noexcept { return xn_; }

  double log_u(double x) const;
  double log_v(double x) const;
  double wu(double x) const;  // u'/u
  double wv(double x) const;  // v'/v
  double u(double x) const;
  double v(double x) const;
  double du(double x) const;
  double dv(double x) const;
  double rho(double x) const;
  double rho_prime(double x) const;
  /// v'u - u'v - 1
  double wronskian_defect(double x) const;
  /// u(max(x,t)) v(min(x,t))
  double green(double x, double t) const;

  std::size_t steps() const noexcept { return track_u_.size() + track_v_.size(); }
  /// A pad stopped short of pad_phase (q too thin near an end).
  bool reduced_confidence() const noexcept { return reduced_confidence_; }

  // Samples on a uniform grid over [lo, hi] (filled by build_fss).
  const std::vector<double>& grid() const noexcept { return grid_; }
  double wronskian_residual() const noexcept { return wronskian_residual_; }

 private:
  friend FundamentalSystem build_window(const LocalScale&, double, double,
                                        const FssConfig&, double);
  friend FundamentalSystem build_fss(const LocalScale&, double, int, const FssConfig&);

  void check(double x) const;

  double lo_ = 0, hi_ = 0, a_ = 0, b_ = 0;
  double x0_ = 0, xn_ = 0;
  RiccatiTrack track_u_, track_v_;
  std::vector<double> grid_;
  double wronskian_residual_ = 0.0;
  bool reduced_confidence_ = false;
};

/// FSS over [lo, hi] (plus pads) scaled so that u = v and the Wronskian is
/// one at `normalize_at` (default: the middle of [lo, hi]), which therefore
/// becomes the crossing point x0.
FundamentalSystem build_window(const LocalScale& scale, double lo, double hi,
                               const FssConfig& cfg = {},
                               double normalize_at = std::numeric_limits<double>::quiet_NaN());

/// FSS over [-X, X] normalized at 0, with `n` uniform samples and the
/// sampled Wronskian residual. Requires X >= 10 d(0).
FundamentalSystem build_fss(const LocalScale& scale, double X, int n,
                            const FssConfig& cfg = {});

/// Builds and caches windows on demand. Local quantities (rho, u(t)/u(x),
/// G(x,t)/rho(x)) do not depend on which window answers them.
class FssAtlas {
 public:
  explicit FssAtlas(const LocalScale& scale, FssConfig cfg = {}, double margin = 8.0);

  /// A window whose trusted range contains [lo, hi]. New windows extend the
  /// request by `margin` local scales on each side.
  std::shared_ptr<const FundamentalSystem> covering(double lo, double hi) const;
  std::shared_ptr<const FundamentalSystem> around(double x) const { return covering(x, x); }

  void add(std::shared_ptr<const FundamentalSystem> fs) const;
  const LocalScale& scale() const noexcept { return scale_; }
  const FssConfig& config() const noexcept { return cfg_; }
  std::size_t size() const;

 private:
  const LocalScale& scale_;
  FssConfig cfg_;
  double margin_;
  mutable std::mutex mutex_;
  mutable std::vector<std::shared_ptr<const FundamentalSystem>> windows_;
};

// ---------------------------------------------------------------------------
// Structural checks

struct StructureReport {
  int probes = 0;
  int violations = 0;
  double wronskian_residual = 0.0;
  double max_rho_prime = 0.0;
  double min_rho_over_d = 0.0;  // rho / d, should lie in [1/(2 sqrt2), sqrt2]
  double max_rho_over_d = 0.0;
  std::vector<std::string> witnesses;
};

/// At every probe: signs of u, v, u', v', the Wronskian, |rho'| < 1 + tol and
/// the sandwich d/(2 sqrt2) <= rho <= sqrt2 d.
StructureReport check_structure(const FssAtlas& atlas, const std::vector<double>& probes,
                                double tol_w = 1e-6, double tol_rho = 1e-6);

/// Rebuilds u, v on the window samples from rho and x0 (quadrature of
/// 1/rho) and returns the largest relative deviation; the kernel identity
/// G(x,t) = sqrt(rho(x) rho(t)) exp(-|int_x^t 1/(2 rho)|) is folded in.
double davies_harrell_check(const FundamentalSystem& fs, double lo, double hi, int samples = 41);

struct EquivalenceReport {
  int probes = 0;
  int violations = 0;
  double worst_ratio = 1.0;  // max over checks of max(r, 1/r)
  std::vector<std::string> witnesses;
};

/// u(t)/u(x), v(t)/v(x), rho(t)/rho(x) within [1/c, c] and d(t)/d(x) within
/// [1/4, 4] for |t - x| <= d(x).
EquivalenceReport local_equivalence_check(const FssAtlas& atlas,
                                          const std::vector<double>& probes,
                                          double c = 60.0, int neighbours = 8);

// ---------------------------------------------------------------------------
// Green operator

struct WeightedNorm {
  double value;
  realline::Verdict verdict;
};

struct GreenSolution {
  std::vector<double> grid;
  std::vector<double> y;
  std::vector<double> dy;
  double residual_sup = 0.0;   // sup of block-averaged |-y'' + q y - f|
  double f_sup = 0.0;
  WeightedNorm y_norm{0.0, realline::Verdict::converged};  // ||mu y||_p
  WeightedNorm f_norm{0.0, realline::Verdict::converged};  // ||theta f||_p
  double ratio = 0.0;
  bool f_in_space = true;
  bool tail_model_used = false;
};

struct GreenConfig {
  int samples = 401;          // grid points over [fs.lo(), fs.hi()]
  bool compute_residual = true;
};

/// y = G f over the window of `fs`: y(x) = u(x) int_{-inf}^x v f + v(x)
/// int_x^inf u f, accumulated cell by cell in log form, with exponential
/// tails (f frozen at the window ends) beyond the integrated range.
/// Weighted norms use ||g||_{p,w} = (int |w g|^p)^(1/p).
GreenSolution apply_green(const FundamentalSystem& fs, const ScalarFn& f, double p,
                          const ScalarFn& mu, const ScalarFn& theta,
                          const localscale::Potential& q, const GreenConfig& cfg = {});

/// Columns x, u, v, rho and, when a solution is given, y.
realline::CsvWriter fss_profile(const FundamentalSystem& fs, const GreenSolution* y = nullptr);

}  // namespace sladm::fss
