#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sladm/expanding_grid.hpp"
#include "sladm/fundamental_system.hpp"
#include "sladm/hardy.hpp"
#include "sladm/local_scale.hpp"

namespace sladm::admissibility {

using hardy::HardyWeights;
using hardy::NormBound;
using localscale::LocalScale;
using localscale::Potential;
using realline::Grade;
using realline::GridConfig;
using realline::GridSup;
using realline::QuadratureConfig;

struct AdmissibilityConfig {
  GridConfig grid;
  hardy::HardyConfig hardy;  // its grid is replaced by `grid`
  fss::FssConfig fss;
  QuadratureConfig quad = [] {
    QuadratureConfig c;
    c.rel_tol = 1e-9;
    c.abs_tol = 1e-300;
    c.max_subdivisions = 20000;
    return c;
  }();
  double tol_H = 0.05;
  double tol_agree = 0.05;
  std::vector<double> q0_radii{1.0, 2.0, 4.0};
};

struct GradedCheck {
  Grade grade = Grade::inconclusive;
  std::string detail;
};

/// Positive mass of q on (-inf, x] and [x, inf) at every default probe.
GradedCheck check_21(const Potential& q, const AdmissibilityConfig& cfg = {});

/// Divergence of int mu over both half-lines.
GradedCheck check_42(const realline::ScalarFn& mu, const AdmissibilityConfig& cfg = {});

struct Q0Result {
  double a;
  GridSup profile;  // infimum profile of int_{x-a}^{x+a} q
  Grade positive;   // pass: the infimum stays away from 0
};

Q0Result q0(double a, const Potential& q, const AdmissibilityConfig& cfg = {});

struct SolvabilityReport {
  Grade grade = Grade::inconclusive;
  Grade by_d_hat = Grade::inconclusive;  // sup d^ finite
  Grade by_q0 = Grade::inconclusive;     // some q0(a) > 0
  GridSup d_hat;
  std::vector<Q0Result> q0;
  std::string diagnostic;  // set when the two criteria disagree
};

/// Unweighted L_p solvability graded twice: through the growth of d^ and
/// through q0(a) for the configured radii. Disagreement is inconclusive.
SolvabilityReport lp_solvability(const LocalScale& scale, const AdmissibilityConfig& cfg = {});

struct AgreementReport {
  Grade grade = Grade::inconclusive;
  Grade mu = Grade::inconclusive;
  Grade theta = Grade::inconclusive;
  GridSup mu_profile;     // |mu'/mu| d
  GridSup theta_profile;  // |(1/theta)' theta| d
};

/// (mu'/mu) d -> 0 and ((1/theta)'/(1/theta)) d -> 0 on the expanding grid,
/// derivatives by central differences of log mu and log theta.
AgreementReport agreement_check(const HardyWeights& w, const LocalScale& scale,
                                const AdmissibilityConfig& cfg = {});

struct Certificate {
  double value;  // +inf when growth is indicated
  Grade finite;
  GridSup profile;
};

/// sup (mu / theta) d^2 over the expanding grid.
Certificate m_certificate(const HardyWeights& w, const LocalScale& scale,
                          const AdmissibilityConfig& cfg = {});

/// inf q* theta over the expanding grid; `finite` grades positivity.
Certificate m0_value(const realline::ScalarFn& theta, const LocalScale& scale,
                     const AdmissibilityConfig& cfg = {});

enum class Verdict { admissible, not_admissible, inconclusive };

/// "admissible-indicated", "not-admissible-indicated", "inconclusive".
std::string_view to_string(Verdict v) noexcept;
/// 0, 1 and 2 respectively.
int exit_code(Verdict v) noexcept;

struct ProvenanceEntry {
  std::string check;
  std::string basis;
  std::string grade;
};

struct AdmissibilityReport {
  GradedCheck cond_21;
  GradedCheck cond_42;
  SolvabilityReport solvability;
  Grade in_H = Grade::inconclusive;
  localscale::ClassHReport class_H;
  AgreementReport agreement;
  Certificate m;
  Certificate m0;
  hardy::SBounds s;
  /// Hardy parts of w alone: sup H_p and sup H~_p (unset for p = 1).
  hardy::HardyBound hardy;
  hardy::HardyBound hardy_tilde;
  Grade s_route = Grade::inconclusive;
  Grade m_route = Grade::inconclusive;
  Verdict verdict = Verdict::inconclusive;
  std::string stage;  // first stage that decided or blocked the verdict
  std::vector<ProvenanceEntry> provenance;
  double p = 2.0;
};

/// The full pipeline. Preconditions that do not pass make the verdict
/// inconclusive. Otherwise the S-norm bounds decide; when q is in class H
/// and both weights agree with q, the certificate m must decide the same way
/// or the verdict is inconclusive.
AdmissibilityReport verdict(const LocalScale& scale, const HardyWeights& w,
                            const AdmissibilityConfig& cfg = {});

nlohmann::json to_json(const AdmissibilityReport& r);
nlohmann::json to_json(const GridSup& g);

/// A weight pair built from the local scale.
struct WeightPair {
  HardyWeights weights;
  std::string mu_description;
  std::string theta_description;
  Grade precondition = Grade::inconclusive;
  std::string detail;
  /// Expected grade of the unweighted pair alongside (fail when sup d is
  /// unbounded).
  Grade unweighted_pair = Grade::inconclusive;
  double m0 = 0.0;
};

/// mu = q* and theta = 1. Preconditions: class H, sup d unbounded, and
/// divergent int q* on both half-lines. `scale` must outlive the result.
WeightPair special_pair_qstar(const LocalScale& scale, double p,
                              const AdmissibilityConfig& cfg = {});

/// mu = 1/d for the given theta. Preconditions: class H and inf q* theta > 0.
/// `scale` must outlive the result.
WeightPair special_pair_theta(const LocalScale& scale, realline::ScalarFn theta,
                              std::string theta_description, double p,
                              const AdmissibilityConfig& cfg = {});

struct StabilityRow {
  std::string kind;
  double centre;
  double width;
  double ratio;  // NaN when skipped
  bool skipped;
};

struct StabilityReport {
  double max_ratio = 0.0;
  std::vector<StabilityRow> rows;
  int skipped = 0;
};

/// ||G f||_{p,mu} / ||f||_{p,theta} for `count` seeded test functions
/// (Gaussian bumps, oscillatory packets, truncated Cauchy profiles) centred
/// in [-spread, spread].
StabilityReport stability_probe(const fss::FssAtlas& atlas, const HardyWeights& w, int count,
                                std::uint64_t seed, double spread = 20.0);

}  // namespace sladm::admissibility
