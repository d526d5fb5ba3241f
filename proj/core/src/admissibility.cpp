#include "sladm/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sladm/error.hpp"
#include "sladm/quadrature.hpp"

namespace sladm::admissibility {

using realline::Side;
using realline::Trend;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Largest radius searched for positive mass of q.
constexpr int kMassDoublings = 30;

Grade from_trend(Trend t) {
  switch (t) {
    case Trend::bounded:
      return Grade::pass;
    case Trend::growing:
      return Grade::fail;
    case Trend::inconclusive:
      break;
  }
  return Grade::inconclusive;
}

Grade all_of(std::initializer_list<Grade> gs) {
  bool inconclusive = false;
  for (Grade g : gs) {
    if (g == Grade::fail) return Grade::fail;
    if (g == Grade::inconclusive) inconclusive = true;
  }
  return inconclusive ? Grade::inconclusive : Grade::pass;
}

std::string str(Grade g) { return std::string(realline::to_string(g)); }

// Mass of q on [x, x + R] (dir > 0) or [x - R, x], R doubling until positive.
double first_positive_mass(const Potential& q, double x, double dir) {
  double R = 1.0;
  for (int k = 0; k <= kMassDoublings; ++k, R *= 2.0) {
    const double m = dir > 0 ? q.integral(x, x + R) : q.integral(x - R, x);
    if (m > 0.0) return m;
  }
  return 0.0;
}

double log_derivative(const realline::ScalarFn& g, double x) {
  const double h = localscale::default_fd_step(x);
  return (std::log(g(x + h)) - std::log(g(x - h))) / (2.0 * h);
}

GridConfig unrefined(GridConfig g) {
  g.refine_argmax = false;
  return g;
}

}  // namespace

GradedCheck check_21(const Potential& q, const AdmissibilityConfig& cfg) {
  GradedCheck out;
  bool any_positive = false;
  double witness = kNaN;
  const char* side = "";
  for (double x : realline::default_probes(cfg.grid.max_exponent, true)) {
    const double left = first_positive_mass(q, x, -1.0);
    const double right = first_positive_mass(q, x, +1.0);
    any_positive = any_positive || left > 0.0 || right > 0.0;
    if (std::isnan(witness) && !(left > 0.0 && right > 0.0)) {
      witness = x;
      side = left > 0.0 ? "right" : "left";
    }
  }
  if (!any_positive) {
    out.grade = Grade::inconclusive;
    out.detail = "q vanishes numerically on every probed half-line";
  } else if (!std::isnan(witness)) {
    out.grade = Grade::fail;
    out.detail = std::string("no mass on the ") + side + " half-line from x = " +
                 realline::format_double(witness);
  } else {
    out.grade = Grade::pass;
    out.detail = "positive mass on both half-lines at every probe";
  }
  return out;
}

GradedCheck check_42(const realline::ScalarFn& mu, const AdmissibilityConfig& cfg) {
  const auto left = realline::integrate_improper(mu, Side::left_tail, cfg.quad);
  const auto right = realline::integrate_improper(mu, Side::right_tail, cfg.quad);
  auto name = [](realline::Verdict v) { return std::string(realline::to_string(v)); };
  GradedCheck out;
  out.detail = "left tail " + name(left.verdict) + ", right tail " + name(right.verdict);
  using realline::Verdict;
  if (left.verdict == Verdict::divergent && right.verdict == Verdict::divergent) {
    out.grade = Grade::pass;
  } else if (left.verdict == Verdict::converged || right.verdict == Verdict::converged) {
    out.grade = Grade::fail;
  } else {
    out.grade = Grade::inconclusive;
  }
  return out;
}

Q0Result q0(double a, const Potential& q, const AdmissibilityConfig& cfg) {
  if (!(a > 0.0)) throw PreconditionError("q0: a must be positive");
  GridSup profile = realline::inf_on_expanding_grid(
      [&](double x) { return q.integral(x - a, x + a); }, cfg.grid);
  // The trend refers to 1/mass: growing means the infimum tends to 0.
  const Grade g = from_trend(profile.trend);
  return {a, std::move(profile), g};
}

SolvabilityReport lp_solvability(const LocalScale& scale, const AdmissibilityConfig& cfg) {
  SolvabilityReport r;
  r.d_hat = realline::sup_on_expanding_grid([&](double x) { return scale.d_hat(x); }, cfg.grid);
  r.by_d_hat = from_trend(r.d_hat.trend);
  bool any_pass = false;
  bool all_fail = true;
  for (double a : cfg.q0_radii) {
    r.q0.push_back(q0(a, scale.potential(), cfg));
    any_pass = any_pass || r.q0.back().positive == Grade::pass;
    all_fail = all_fail && r.q0.back().positive == Grade::fail;
  }
  r.by_q0 = any_pass ? Grade::pass : (all_fail ? Grade::fail : Grade::inconclusive);
  if (r.by_d_hat == r.by_q0) {
    r.grade = r.by_d_hat;
  } else {
    r.grade = Grade::inconclusive;
    if (r.by_d_hat != Grade::inconclusive && r.by_q0 != Grade::inconclusive) {
      r.diagnostic = "criteria disagree: sup d^ graded " + str(r.by_d_hat) + " (estimate " +
                     realline::format_double(r.d_hat.estimate) + ", trend " +
                     std::string(realline::to_string(r.d_hat.trend)) + "), q0 graded " +
                     str(r.by_q0);
    }
  }
  return r;
}

AgreementReport agreement_check(const HardyWeights& w, const LocalScale& scale,
                                const AdmissibilityConfig& cfg) {
  AgreementReport r;
  const GridConfig grid = unrefined(cfg.grid);
  r.mu_profile = realline::sup_on_expanding_grid(
      [&](double x) { return std::fabs(log_derivative(w.mu, x)) * scale.d(x); }, grid);
  r.theta_profile = realline::sup_on_expanding_grid(
      [&](double x) { return std::fabs(log_derivative(w.theta, x)) * scale.d(x); }, grid);
  r.mu = realline::grade_limit_zero(r.mu_profile, cfg.tol_agree, grid.window);
  r.theta = realline::grade_limit_zero(r.theta_profile, cfg.tol_agree, grid.window);
  r.grade = all_of({r.mu, r.theta});
  return r;
}

Certificate m_certificate(const HardyWeights& w, const LocalScale& scale,
                          const AdmissibilityConfig& cfg) {
  GridSup g = realline::sup_on_expanding_grid(
      [&](double x) {
        const double d = scale.d(x);
        return w.mu(x) / w.theta(x) * d * d;
      },
      cfg.grid);
  const Grade finite = from_trend(g.trend);
  const double value = finite == Grade::fail ? kInf : g.estimate;
  return {value, finite, std::move(g)};
}

Certificate m0_value(const realline::ScalarFn& theta, const LocalScale& scale,
                     const AdmissibilityConfig& cfg) {
  GridSup g = realline::inf_on_expanding_grid(
      [&](double x) { return scale.q_star(x) * theta(x); }, cfg.grid);
  const Grade positive = from_trend(g.trend);
  const double value = positive == Grade::fail ? 0.0 : g.estimate;
  return {value, positive, std::move(g)};
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::admissible:
      return "admissible-indicated";
    case Verdict::not_admissible:
      return "not-admissible-indicated";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

int exit_code(Verdict v) noexcept {
  switch (v) {
    case Verdict::admissible:
      return 0;
    case Verdict::not_admissible:
      return 1;
    case Verdict::inconclusive:
      break;
  }
  return 2;
}

AdmissibilityReport verdict(const LocalScale& scale, const HardyWeights& w,
                            const AdmissibilityConfig& cfg) {
  AdmissibilityReport r;
  r.p = w.p;
  hardy::validate_weights(w, realline::default_probes(cfg.grid.max_exponent, true));
  auto note = [&](const char* check, const char* basis, Grade g) {
    r.provenance.push_back({check, basis, str(g)});
  };

  r.cond_21 = check_21(scale.potential(), cfg);
  note("cond_21", "local scale exists: q has positive mass on both half-lines", r.cond_21.grade);
  r.cond_42 = check_42(w.mu, cfg);
  note("cond_42", "uniqueness in the weighted space: mu has divergent mass on both half-lines",
       r.cond_42.grade);
  if (r.cond_21.grade != Grade::pass) {
    r.stage = "cond_21";
    return r;
  }

  r.solvability = lp_solvability(scale, cfg);
  note("lp_solvability", "unweighted solvability: sup d^ finite, cross-checked with q0(a) > 0",
       r.solvability.grade);
  r.class_H = localscale::class_H_check(scale, unrefined(cfg.grid), cfg.tol_H);
  r.in_H = r.class_H.in_H;
  note("in_H", "class H: nu(x) -> 0 at infinity", r.in_H);
  r.agreement = agreement_check(w, scale, cfg);
  note("agreement", "weights agree with q: (mu'/mu) d -> 0 and (theta'/theta) d -> 0",
       r.agreement.grade);
  r.m = m_certificate(w, scale, cfg);
  note("m_certificate", "certificate m = sup (mu/theta) d^2", r.m.finite);
  r.m0 = m0_value(w.theta, scale, cfg);
  note("m0", "m0 = inf q* theta", r.m0.finite);

  hardy::HardyConfig hc = cfg.hardy;
  hc.grid = cfg.grid;
  fss::FssAtlas atlas(scale, cfg.fss);
  try {
    r.s = hardy::s_operator_bounds(atlas, w, hc);
    if (std::isinf(r.s.bound.upper)) {
      r.s_route = Grade::fail;
    } else {
      const bool graded = r.s.M.trend == Trend::bounded &&
                          (w.p == 1.0 || r.s.M_tilde.trend == Trend::bounded);
      r.s_route = graded ? Grade::pass : Grade::inconclusive;
    }
  } catch (const InconclusiveError&) {
    r.s_route = Grade::inconclusive;
  }
  if (w.p > 1.0) {
    try {
      r.hardy = hardy::hardy_norm_bounds(w, false, hc);
      r.hardy_tilde = hardy::hardy_norm_bounds(w, true, hc);
    } catch (const InconclusiveError&) {
      r.hardy = {};
      r.hardy_tilde = {};
      r.hardy.sup.estimate = r.hardy_tilde.sup.estimate = kNaN;
    }
  }
  note("s_bounds",
       w.p == 1.0 ? "S bounded on L_1: exact kernel column norm"
                  : "S bounded on L_p: two-sided Muckenhoupt bounds of its Hardy parts",
       r.s_route);

  if (r.cond_42.grade != Grade::pass) {
    r.stage = "cond_42";
    return r;
  }
  const bool certificate_applies =
      r.in_H == Grade::pass && r.agreement.grade == Grade::pass;
  r.m_route = certificate_applies ? r.m.finite : Grade::inconclusive;

  Grade final = r.s_route;
  r.stage = "s_bounds";
  if (certificate_applies) {
    if (r.m_route != Grade::inconclusive && r.s_route != Grade::inconclusive &&
        r.m_route != r.s_route) {
      final = Grade::inconclusive;
      r.stage = "certificate_vs_s_bounds";
    } else if (r.m_route != Grade::inconclusive) {
      final = r.m_route;
      r.stage = "m_certificate";
    }
  }
  r.verdict = final == Grade::pass   ? Verdict::admissible
              : final == Grade::fail ? Verdict::not_admissible
                                     : Verdict::inconclusive;
  note("verdict", "admissible iff S is bounded on L_p (certificate m when it applies)", final);
  return r;
}

nlohmann::json to_json(const GridSup& g) {
  nlohmann::json shells = nlohmann::json::array();
  for (const auto& s : g.shells) {
    shells.push_back({{"radius", s.radius},
                      {"shell_max", s.shell_max},
                      {"running_max", s.running_max},
                      {"argmax", s.argmax}});
  }
  return {{"estimate", g.estimate},
          {"argmax", g.argmax},
          {"trend", std::string(realline::to_string(g.trend))},
          {"shells", shells}};
}

nlohmann::json to_json(const AdmissibilityReport& r) {
  using nlohmann::json;
  json q0 = json::array();
  for (const auto& row : r.solvability.q0) {
    q0.push_back({{"a", row.a},
                  {"inf", row.profile.estimate},
                  {"argmin", row.profile.argmax},
                  {"grade", str(row.positive)}});
  }
  json prov = json::array();
  for (const auto& p : r.provenance) {
    prov.push_back({{"check", p.check}, {"basis", p.basis}, {"grade", p.grade}});
  }
  json out = {
      {"p", r.p},
      {"verdict", std::string(to_string(r.verdict))},
      {"exit_code", exit_code(r.verdict)},
      {"stage", r.stage},
      {"cond_21", {{"grade", str(r.cond_21.grade)}, {"detail", r.cond_21.detail}}},
      {"cond_42", {{"grade", str(r.cond_42.grade)}, {"detail", r.cond_42.detail}}},
      {"lp_solvable", str(r.solvability.grade)},
      {"lp_solvability",
       {{"by_d_hat", str(r.solvability.by_d_hat)},
        {"by_q0", str(r.solvability.by_q0)},
        {"d_hat_sup", r.solvability.d_hat.estimate},
        {"d_hat_sup_trend", std::string(realline::to_string(r.solvability.d_hat.trend))},
        {"q0_profile", q0},
        {"diagnostic", r.solvability.diagnostic}}},
      {"in_H", str(r.in_H)},
      {"nu_sup_last_shell", r.class_H.abs_nu.shells.empty()
                                ? 0.0
                                : r.class_H.abs_nu.shells.back().shell_max},
      {"agreement",
       {{"grade", str(r.agreement.grade)},
        {"mu", str(r.agreement.mu)},
        {"theta", str(r.agreement.theta)},
        {"mu_last_shell",
         r.agreement.mu_profile.shells.empty() ? 0.0
                                               : r.agreement.mu_profile.shells.back().shell_max},
        {"theta_last_shell", r.agreement.theta_profile.shells.empty()
                                 ? 0.0
                                 : r.agreement.theta_profile.shells.back().shell_max}}},
      {"m_value", r.m.value},
      {"m_grade", str(r.m.finite)},
      {"m0_value", r.m0.value},
      {"m0_grade", str(r.m0.finite)},
      {"s_bounds",
       {{"lower", r.s.bound.lower}, {"upper", r.s.bound.upper}, {"method", r.s.bound.method}}},
      {"s_lower", r.s.bound.lower},
      {"s_upper", r.s.bound.upper},
      {"Hp_sup", r.hardy.sup.estimate},
      {"Hp_tilde_sup", r.hardy_tilde.sup.estimate},
      {"Mp_sup", r.s.M.estimate},
      {"Mp_tilde_sup", r.s.M_tilde.estimate},
      {"argmax_x", r.s.argmax},
      {"tail_model_used", r.s.tail_model_used},
      {"s_route", str(r.s_route)},
      {"m_route", str(r.m_route)},
      {"provenance", prov},
  };
  return out;
}

WeightPair special_pair_qstar(const LocalScale& scale, double p, const AdmissibilityConfig& cfg) {
  WeightPair out;
  const LocalScale* s = &scale;
  out.weights = {[s](double x) { return s->q_star(x); }, [](double) { return 1.0; }, p};
  out.mu_description = "q*";
  out.theta_description = "1";
  const Grade in_H = localscale::class_H_check(scale, unrefined(cfg.grid), cfg.tol_H).in_H;
  const GridSup d = realline::sup_on_expanding_grid([s](double x) { return s->d(x); },
                                                    unrefined(cfg.grid));
  // sup d must be infinite here, so a growing d passes.
  const Grade d_unbounded = d.trend == Trend::growing   ? Grade::pass
                            : d.trend == Trend::bounded ? Grade::fail
                                                        : Grade::inconclusive;
  const Grade mass = check_42(out.weights.mu, cfg).grade;
  out.precondition = all_of({in_H, d_unbounded, mass});
  out.unweighted_pair = d_unbounded == Grade::pass   ? Grade::fail
                        : d_unbounded == Grade::fail ? Grade::pass
                                                     : Grade::inconclusive;
  out.detail = "in_H " + str(in_H) + ", sup d unbounded " + str(d_unbounded) +
               ", int q* divergent " + str(mass);
  return out;
}

WeightPair special_pair_theta(const LocalScale& scale, realline::ScalarFn theta,
                              std::string theta_description, double p,
                              const AdmissibilityConfig& cfg) {
  WeightPair out;
  const LocalScale* s = &scale;
  out.weights = {[s](double x) { return 1.0 / s->d(x); }, std::move(theta), p};
  out.mu_description = "1/d";
  out.theta_description = std::move(theta_description);
  const Grade in_H = localscale::class_H_check(scale, unrefined(cfg.grid), cfg.tol_H).in_H;
  const Certificate m0 = m0_value(out.weights.theta, scale, cfg);
  out.m0 = m0.value;
  out.precondition = all_of({in_H, m0.finite});
  out.detail = "in_H " + str(in_H) + ", m0 = " + realline::format_double(m0.value) + " graded " +
               str(m0.finite);
  return out;
}

StabilityReport stability_probe(const fss::FssAtlas& atlas, const HardyWeights& w, int count,
                                std::uint64_t seed, double spread) {
  StabilityReport out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-spread, spread);
  std::uniform_real_distribution<double> log_width(std::log(0.3), std::log(3.0));
  std::uniform_real_distribution<double> wave(0.5, 8.0);
  const auto& q = atlas.scale().potential();
  for (int i = 0; i < count; ++i) {
    const int kind = i % 3;
    const double c = centre(rng);
    const double s = std::exp(log_width(rng));
    const double k = wave(rng);
    realline::ScalarFn f;
    double reach = 8.0 * s;
    const char* name = "bump";
    switch (kind) {
      case 0:
        f = [c, s](double x) { return std::exp(-((x - c) / s) * ((x - c) / s)); };
        break;
      case 1:
        name = "packet";
        f = [c, s, k](double x) {
          return std::exp(-((x - c) / s) * ((x - c) / s)) * std::cos(k * (x - c));
        };
        break;
      default:
        name = "cauchy";
        reach = 20.0 * s;
        f = [c, s](double x) {
          const double z = (x - c) / s;
          const double cut = std::pow(z / 10.0, 8);
          return cut > 700.0 ? 0.0 : std::exp(-cut) / (1.0 + z * z);
        };
        break;
    }
    StabilityRow row{name, c, s, kNaN, true};
    const auto fs = atlas.covering(c - reach, c + reach);
    fss::GreenConfig gc;
    gc.samples = 2001;
    gc.compute_residual = false;
    const auto sol = fss::apply_green(*fs, f, w.p, w.mu, w.theta, q, gc);
    if (sol.f_in_space && std::isfinite(sol.ratio)) {
      row.ratio = sol.ratio;
      row.skipped = false;
      out.max_ratio = std::max(out.max_ratio, sol.ratio);
    } else {
      ++out.skipped;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace sladm::admissibility
