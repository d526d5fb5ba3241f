// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sladm/sladm.hpp"

using namespace sladm;
using admissibility::AdmissibilityConfig;
using hardy::HardyWeights;
using localscale::LocalScale;
using realline::Grade;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates a verdict and a short human readable trail.
class Ledger {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_ << what << "; ";
    }
  }
  void note(const std::string& s) { notes_ << s << "; "; }
  Outcome outcome() const {
    std::string d = notes_.str();
    if (!pass_) d = "FAILED: " + failures_.str() + "| " + d;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::ostringstream failures_;
  std::ostringstream notes_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return xs;
}

// n probes symmetric about 0, log-spaced in |x| up to R, plus 0.
std::vector<double> log_probes(double R, int n) {
  std::vector<double> xs{0.0};
  const int half = (n - 1) / 2;
  for (int i = 0; i < half; ++i) {
    const double r = std::pow(R, static_cast<double>(i + 1) / half) - 1.0 + 0.05;
    xs.push_back(r);
    xs.push_back(-r);
  }
  return xs;
}

localscale::PotentialPtr expr(const char* q) {
  return localscale::expression_potential(realline::parse_function(q));
}

HardyWeights ones(double p = 2.0) {
  return {[](double) { return 1.0; }, [](double) { return 1.0; }, p};
}

HardyWeights example6_weights() {
  return {[](double x) { return 1.0 / (std::sqrt(1.0 + x * x) * std::log(2.0 + x * x)); },
          [](double x) { return 1.0 / std::log(2.0 + x * x); }, 2.0};
}

struct Fixture {
  const char* name;
  localscale::PotentialPtr q;
  double probe_radius;  // structural probes stay within |x| <= radius
};

std::vector<Fixture> potential_matrix() {
  return {{"1", expr("1"), 50.0},
          {"1+x^2", expr("1 + x^2"), 50.0},
          {"example6", localscale::example6_potential(), 1e6},
          {"2+sin(x)", expr("2 + sin(x)"), 200.0}};
}

// 1. Closed forms for q = 1, mu = theta = 1.
Outcome closed_form() {
  Ledger L;
  const LocalScale scale(expr("1"));
  double dev = 0.0;
  for (double x : realline::default_probes(20, true)) {
    dev = std::max({dev, std::fabs(scale.d(x) - 1.0), std::fabs(scale.d_hat(x) - 1.0)});
  }
  L.require(dev <= 1e-8, "d, d^ deviate " + fmt("%.3g", dev));
  L.note("|d-1|,|d^-1| <= " + fmt("%.2g", dev));

  fss::FssAtlas atlas(scale);
  const auto fs = atlas.covering(-10.0, 10.0);
  double rho_err = 0.0, g_err = 0.0;
  for (double x : linspace(-10.0, 10.0, 201)) {
    rho_err = std::max(rho_err, std::fabs(fs->rho(x) / 0.5 - 1.0));
  }
  for (double x : linspace(-5.0, 5.0, 21)) {
    for (double t : linspace(-5.0, 5.0, 21)) {
      const double exact = 0.5 * std::exp(-std::fabs(x - t));
      g_err = std::max(g_err, std::fabs(fs->green(x, t) / exact - 1.0));
    }
  }
  L.require(rho_err <= 1e-6, "rho rel err " + fmt("%.3g", rho_err));
  L.require(g_err <= 1e-6, "G rel err " + fmt("%.3g", g_err));
  L.note("rho rel " + fmt("%.2g", rho_err) + ", G rel " + fmt("%.2g", g_err));

  const auto w = ones();
  const auto sol = fss::apply_green(*fs, [](double) { return 1.0; }, 2.0, w.mu, w.theta,
                                    scale.potential());
  double y_err = 0.0;
  for (double y : sol.y) y_err = std::max(y_err, std::fabs(y - 1.0));
  L.require(y_err <= 1e-6, "y = G1 err " + fmt("%.3g", y_err));
  L.note("|G1 - 1| " + fmt("%.2g", y_err));

  const auto s1 = hardy::s_operator_bounds(atlas, ones(1.0));
  const double s_err = std::max(std::fabs(s1.bound.lower - 1.0), std::fabs(s1.bound.upper - 1.0));
  L.require(s_err <= 1e-4, "||S||_1 err " + fmt("%.3g", s_err));
  L.note("||S||_1 = " + fmt("%.10g", s1.bound.upper));
  return L.outcome();
}

// 2. Structural invariants on the potential matrix.
Outcome structural() {
  Ledger L;
  for (const auto& fx : potential_matrix()) {
    const LocalScale scale(fx.q);
    const auto probes = log_probes(fx.probe_radius, 101);
    fss::FssAtlas atlas(scale);
    const auto st = fss::check_structure(atlas, probes, 1e-6);
    const auto inv = localscale::check_scale_invariants(scale, probes);
    L.require(st.probes >= 100, std::string(fx.name) + ": too few probes");
    L.require(st.violations == 0, std::string(fx.name) + ": structure violations " +
                                      std::to_string(st.violations) +
                                      (st.witnesses.empty() ? "" : " e.g. " + st.witnesses[0]));
    L.require(inv.violations == 0, std::string(fx.name) + ": scale violations " +
                                       std::to_string(inv.violations) +
                                       (inv.witnesses.empty() ? "" : " e.g. " + inv.witnesses[0]));
    L.note(std::string(fx.name) + " rho/d in [" + fmt("%.3f", st.min_rho_over_d) + "," +
           fmt("%.3f", st.max_rho_over_d) + "] W " + fmt("%.1e", st.wronskian_residual));
  }
  return L.outcome();
}

// 3. Hardy sandwich against discretized operators.
Outcome hardy_sandwich() {
  Ledger L;
  struct Pair {
    const char* name;
    HardyWeights w;
    double L;
  };
  auto e = [](double t) { return std::exp(-std::fabs(t)); };
  auto cauchy = [](double t) { return 1.0 / (1.0 + t * t); };
  auto half_line = [](double t) { return t < 0.0 ? 1.0 : std::exp(-2.0 * t); };
  const std::vector<Pair> pairs{
      {"exp,exp,p=2", {e, e, 2.0}, 30.0},
      {"exp,exp,p=3", {e, e, 3.0}, 30.0},
      {"cauchy,cauchy,p=2", {cauchy, cauchy, 2.0}, 400.0},
      {"exp,cauchy,p=1.5", {e, cauchy, 1.5}, 400.0},
      {"step-exp,exp,p=4", {e, half_line, 4.0}, 30.0},
  };
  for (const auto& pr : pairs) {
    const auto hb = hardy::hardy_norm_bounds(pr.w);
    const double H = hb.sup.estimate;
    L.require(std::isfinite(H), std::string(pr.name) + ": H_p not finite");
    const auto& w = pr.w;
    const auto op = hardy::discretize(
        [&](double x, double s) {
          if (s < x) return 0.0;
          const double k = w.mu(x) * w.theta(s);
          return s == x ? 0.5 * k : k;
        },
        pr.L, 1200, 1.0);
    hardy::EmpiricalConfig ec;
    ec.spike_centres = {hb.sup.argmax};
    const double emp = hardy::empirical_operator_norm(op, w.p, ec).value;
    const double lo = 0.95 * H, hi = 1.05 * hardy::hardy_constant(w.p) * H;
    L.require(emp >= lo && emp <= hi, std::string(pr.name) + ": empirical " + fmt("%.5g", emp) +
                                          " outside [" + fmt("%.5g", lo) + "," +
                                          fmt("%.5g", hi) + "]");
    L.note(std::string(pr.name) + " H=" + fmt("%.4g", H) + " emp=" + fmt("%.4g", emp));
  }
  return L.outcome();
}

// 4. The unweighted pair for the built-in example.
Outcome example6_claim_A() {
  Ledger L;
  const auto q = localscale::example6_potential();
  const LocalScale scale(q);
  double small = 0.0, large = 0.0;
  std::vector<double> xs = realline::default_probes(20, true);
  for (double x : {1e2, -1e2, 1e6, -1e6}) xs.push_back(x);
  for (double x : xs) {
    const double dh = scale.d_hat(x);
    if (std::fabs(x) <= 1e2) small = std::max(small, dh);
    if (std::fabs(x) <= 1e6) large = std::max(large, dh);
  }
  const double factor = large / small;
  const double q0 = q->integral(1e6 - 1.0, 1e6 + 1.0);
  const auto solv = admissibility::lp_solvability(scale);
  L.require(factor >= 9.0, "d^ growth factor " + fmt("%.4g", factor));
  L.require(q0 <= 1e-2, "q0(1) at 1e6 = " + fmt("%.3g", q0));
  L.require(solv.grade == Grade::fail, "lp_solvability graded " +
                                           std::string(realline::to_string(solv.grade)));
  L.note("d^ sup factor " + fmt("%.4g", factor) + ", q0(1)@1e6 " + fmt("%.3g", q0) +
         ", lp_solvability fail");
  return L.outcome();
}

// 5. The weighted pair for the built-in example.
Outcome example6_claim_B() {
  Ledger L;
  const auto q = localscale::example6_potential();
  const LocalScale scale(q);
  double worst = 0.0, k1 = 0.0;
  for (double x : {1e3, 1e4, 1e5, 1e6}) {
    worst = std::max(worst, std::fabs(scale.d(x) * std::pow(1.0 + x * x, -0.25) - 1.0));
    k1 = std::max(k1, localscale::kappa1(*q->decomposition(), x).value * std::sqrt(1.0 + x * x));
  }
  const auto r = admissibility::verdict(scale, example6_weights());
  L.require(worst <= 0.05, "d ratio deviation " + fmt("%.3g", worst));
  L.require(k1 <= 10.0, "kappa1 sqrt(1+x^2) = " + fmt("%.4g", k1));
  L.require(r.m.value >= 0.5 && r.m.value <= 2.0, "m = " + fmt("%.4g", r.m.value));
  L.require(r.verdict == admissibility::Verdict::admissible,
            "verdict " + std::string(admissibility::to_string(r.verdict)));
  L.require(admissibility::exit_code(r.verdict) == 0, "exit code");
  L.note("max|d(1+x^2)^-1/4 - 1| " + fmt("%.2g", worst) + ", kappa1 scaled " + fmt("%.4g", k1) +
         ", m " + fmt("%.4g", r.m.value) + ", " + std::string(admissibility::to_string(r.verdict)));
  return L.outcome();
}

// 6. The two unweighted solvability criteria agree.
Outcome criteria_equivalence() {
  Ledger L;
  for (const auto& fx : potential_matrix()) {
    const LocalScale scale(fx.q);
    const auto s = admissibility::lp_solvability(scale);
    const bool agree = s.by_d_hat == s.by_q0 && s.by_d_hat != Grade::inconclusive;
    L.require(agree, std::string(fx.name) + ": d^ " +
                         std::string(realline::to_string(s.by_d_hat)) + " vs q0 " +
                         std::string(realline::to_string(s.by_q0)));
    L.note(std::string(fx.name) + " " + std::string(realline::to_string(s.grade)));
  }
  return L.outcome();
}

// 7. Stability ratio under the S bound on admissible fixtures.
Outcome stability() {
  Ledger L;
  struct Case {
    const char* name;
    localscale::PotentialPtr q;
    HardyWeights w;
  };
  const std::vector<Case> cases{{"1", expr("1"), ones()},
                                {"1,p=1", expr("1"), ones(1.0)},
                                {"1+x^2", expr("1 + x^2"), ones()},
                                {"2+sin(x)", expr("2 + sin(x)"), ones()},
                                {"example6", localscale::example6_potential(), example6_weights()}};
  for (const auto& c : cases) {
    const LocalScale scale(c.q);
    const auto r = admissibility::verdict(scale, c.w);
    if (r.verdict != admissibility::Verdict::admissible) {
      L.require(false, std::string(c.name) + ": not admissible-indicated");
      continue;
    }
    fss::FssAtlas atlas(scale);
    const auto s = admissibility::stability_probe(atlas, c.w, 20, 0);
    const double bound = 1.05 * r.s.bound.upper;
    L.require(s.max_ratio <= bound, std::string(c.name) + ": ratio " + fmt("%.5g", s.max_ratio) +
                                        " > " + fmt("%.5g", bound));
    L.require(s.skipped < 20, std::string(c.name) + ": every sample skipped");
    L.note(std::string(c.name) + " " + fmt("%.4g", s.max_ratio) + " <= " + fmt("%.4g", bound));
  }
  return L.outcome();
}

// 8. Mean value identity on polynomials.
Outcome mean_identity() {
  Ledger L;
  struct Poly {
    const char* f;
    const char* f2;
    double x, t;
  };
  const std::vector<Poly> polys{
      {"1", "0", 0.0, 1.0},
      {"x", "0", 2.0, 3.0},
      {"x^2", "2", 0.0, 1.0},
      {"x^3", "6*x", 1.0, 1.0},
      {"x^4", "12*x^2", -1.0, 2.0},
      {"3*x^4 - x^2 + 5", "36*x^2 - 2", 0.5, 0.75},
      {"x^5 - 2*x", "20*x^3", 1.5, 0.5},
      {"(1+x)^6", "30*(1+x)^4", -0.5, 1.25},
      {"x^7", "42*x^5", 0.0, 1.0},
      {"2 - x + x^2/2 - x^3/6", "1 - x", 3.0, 4.0},
  };
  double worst = 0.0;
  for (const auto& p : polys) {
    const auto f = realline::parse_function(p.f).as_function();
    const auto f2 = realline::parse_function(p.f2).as_function();
    const double r = realline::verify_mean_identity(f, f2, p.x, p.t);
    worst = std::max(worst, r);
    L.require(r <= 1e-8, std::string(p.f) + ": residual " + fmt("%.3g", r));
  }
  L.note("10 polynomials, max residual " + fmt("%.2g", worst));
  return L.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "closed-form suite", closed_form},
      {2, "structural invariants", structural},
      {3, "Hardy sandwich", hardy_sandwich},
      {4, "example: unweighted pair not admissible", example6_claim_A},
      {5, "example: weighted pair admissible", example6_claim_B},
      {6, "solvability criteria agree", criteria_equivalence},
      {7, "stability ratio", stability},
      {8, "quadrature self-test", mean_identity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
