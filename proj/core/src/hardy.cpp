#include "sladm/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "sladm/error.hpp"

namespace sladm::hardy {

using realline::integrate;
using realline::integrate_improper;
using realline::Side;
using realline::Verdict;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_p_above_one(double p, const char* who) {
  if (!(p > 1.0)) throw PreconditionError(std::string(who) + ": requires p > 1");
}

// Improper integral as a number: +inf when divergent.
double improper(const ScalarFn& g, Side side, double origin, const HardyConfig& cfg,
                const char* what) {
  const auto r = integrate_improper(g, side, cfg.quad, origin);
  if (r.verdict == Verdict::divergent) return kInf;
  if (r.verdict == Verdict::inconclusive) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: tail integral inconclusive at x = %.17g", what, origin);
    throw InconclusiveError(buf);
  }
  return r.value;
}

double pow_weight(const ScalarFn& w, double t, double e) { return std::pow(w(t), e); }

struct LocalMass {
  double value;
  double tail;
};

// int over one side of x of exp(e (log_w(t) + L(t) - L(x))), where L is log v
// on the left and log u on the right, plus the frozen-rate tail beyond the
// window.
LocalMass local_mass(const fss::FundamentalSystem& fs, double x, bool left,
                     const std::function<double(double)>& log_w, double e,
                     const HardyConfig& cfg) {
  auto L = [&](double t) { return left ? fs.log_v(t) : fs.log_u(t); };
  const double Lx = L(x);
  auto g = [&](double t) { return std::exp(e * (log_w(t) + L(t) - Lx)); };
  const double end = left ? fs.window_lo() : fs.window_hi();
  const double inner = left ? integrate(g, end, x, cfg.quad).value : integrate(g, x, end, cfg.quad).value;
  const double rate = left ? fs.wv(end) : -fs.wu(end);
  const double tail = g(end) / (e * rate);
  return {inner + tail, tail};
}

void check_tail(const LocalMass& m, double x, const HardyConfig& cfg, const char* who) {
  if (!(m.value > 0.0) || m.tail > cfg.max_tail_fraction * m.value) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%s: window tail carries %.3g of the mass at x = %.17g; weights outgrow the "
                  "decay of u, v",
                  who, m.value > 0.0 ? m.tail / m.value : 1.0, x);
    throw InconclusiveError(buf);
  }
}

}  // namespace

double HardyWeights::p_prime() const noexcept { return p == 1.0 ? kInf : p / (p - 1.0); }

double hardy_constant(double p) noexcept {
  if (p == 1.0) return 1.0;
  const double pp = p / (p - 1.0);
  return std::pow(p, 1.0 / p) * std::pow(pp, 1.0 / pp);
}

void validate_weights(const HardyWeights& w, const std::vector<double>& probes) {
  if (!(w.p >= 1.0)) throw PreconditionError("weights: p must be >= 1");
  if (!w.mu || !w.theta) throw PreconditionError("weights: mu and theta are required");
  for (double x : probes) {
    const double m = w.mu(x);
    const double t = w.theta(x);
    if (!(m > 0.0) || !std::isfinite(m) || !(t > 0.0) || !std::isfinite(t)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "weights: not positive and finite at x = %.17g", x);
      throw PreconditionError(buf);
    }
  }
}

double Hp_at(double x, const HardyWeights& w, const HardyConfig& cfg) {
  require_p_above_one(w.p, "Hp_at");
  const double p = w.p;
  const double pp = w.p_prime();
  const double left = improper([&](double t) { return pow_weight(w.mu, t, p); }, Side::left_tail,
                               x, cfg, "Hp_at");
  const double right = improper([&](double t) { return pow_weight(w.theta, t, pp); },
                                Side::right_tail, x, cfg, "Hp_at");
  if (std::isinf(left) || std::isinf(right)) return kInf;
  return std::pow(left, 1.0 / p) * std::pow(right, 1.0 / pp);
}

double Hp_tilde_at(double x, const HardyWeights& w, const HardyConfig& cfg) {
  require_p_above_one(w.p, "Hp_tilde_at");
  const double p = w.p;
  const double pp = w.p_prime();
  const double left = improper([&](double t) { return pow_weight(w.theta, t, pp); },
                               Side::left_tail, x, cfg, "Hp_tilde_at");
  const double right = improper([&](double t) { return pow_weight(w.mu, t, p); },
                                Side::right_tail, x, cfg, "Hp_tilde_at");
  if (std::isinf(left) || std::isinf(right)) return kInf;
  return std::pow(left, 1.0 / pp) * std::pow(right, 1.0 / p);
}

HardyBound hardy_norm_bounds(const HardyWeights& w, bool tilde, const HardyConfig& cfg) {
  require_p_above_one(w.p, "hardy_norm_bounds");
  GridSup sup = realline::sup_on_expanding_grid(
      [&](double x) { return tilde ? Hp_tilde_at(x, w, cfg) : Hp_at(x, w, cfg); }, cfg.grid);
  NormBound b;
  b.lower = sup.estimate;
  if (sup.trend == Trend::growing || std::isinf(sup.estimate)) {
    b.upper = kInf;
    b.method = "muckenhoupt-unbounded";
  } else {
    b.upper = hardy_constant(w.p) * sup.estimate;
    b.method = sup.trend == Trend::bounded ? "muckenhoupt-sandwich" : "muckenhoupt-sandwich-ungraded";
  }
  return {b, std::move(sup)};
}

GridSup kernel_L1_norm(const Kernel& K, double a, double b, const HardyConfig& cfg, int samples) {
  auto column = [&](double s) {
    auto g = [&](double t) { return std::fabs(K(s, t)); };
    double total = 0.0;
    if (std::isinf(a)) {
      total += improper(g, Side::left_tail, s, cfg, "kernel_L1_norm");
    } else if (a < s) {
      total += integrate(g, a, s, cfg.quad).value;
    }
    if (std::isinf(b)) {
      total += improper(g, Side::right_tail, s, cfg, "kernel_L1_norm");
    } else if (s < b) {
      total += integrate(g, s, b, cfg.quad).value;
    }
    return total;
  };
  if (std::isfinite(a) && std::isfinite(b)) {
    GridSup out{-kInf, a, Trend::bounded, {}};
    for (int i = 1; i <= samples; ++i) {
      const double s = a + (b - a) * static_cast<double>(i) / (samples + 1);
      const double v = column(s);
      if (v > out.estimate) {
        out.estimate = v;
        out.argmax = s;
      }
    }
    return out;
  }
  GridConfig grid = cfg.grid;
  grid.symmetric = std::isinf(a) && std::isinf(b);
  const double origin = std::isinf(a) && std::isinf(b) ? 0.0 : (std::isinf(a) ? b : a);
  const double dir = std::isinf(a) && !std::isinf(b) ? -1.0 : 1.0;
  // One-sided ranges are probed at origin + dir r, r on the expanding grid.
  return realline::sup_on_expanding_grid(
      [&](double r) {
        const double s = grid.symmetric ? r : origin + dir * (1.0 + r);
        return column(s);
      },
      grid);
}

double Mp_at(double x, const fss::FssAtlas& atlas, const HardyWeights& w, const HardyConfig& cfg) {
  require_p_above_one(w.p, "Mp_at");
  const auto fs = atlas.around(x);
  auto log_mu = [&](double t) { return std::log(w.mu(t)); };
  auto log_inv_theta = [&](double t) { return -std::log(w.theta(t)); };
  const auto left = local_mass(*fs, x, true, log_mu, w.p, cfg);
  const auto right = local_mass(*fs, x, false, log_inv_theta, w.p_prime(), cfg);
  check_tail(left, x, cfg, "Mp_at");
  check_tail(right, x, cfg, "Mp_at");
  return fs->rho(x) * std::pow(left.value, 1.0 / w.p) * std::pow(right.value, 1.0 / w.p_prime());
}

double Mp_tilde_at(double x, const fss::FssAtlas& atlas, const HardyWeights& w,
                   const HardyConfig& cfg) {
  require_p_above_one(w.p, "Mp_tilde_at");
  const auto fs = atlas.around(x);
  auto log_mu = [&](double t) { return std::log(w.mu(t)); };
  auto log_inv_theta = [&](double t) { return -std::log(w.theta(t)); };
  const auto left = local_mass(*fs, x, true, log_inv_theta, w.p_prime(), cfg);
  const auto right = local_mass(*fs, x, false, log_mu, w.p, cfg);
  check_tail(left, x, cfg, "Mp_tilde_at");
  check_tail(right, x, cfg, "Mp_tilde_at");
  return fs->rho(x) * std::pow(left.value, 1.0 / w.p_prime()) * std::pow(right.value, 1.0 / w.p);
}

double s_column_L1(double x, const fss::FssAtlas& atlas, const HardyWeights& w,
                   const HardyConfig& cfg) {
  const auto fs = atlas.around(x);
  auto log_mu = [&](double t) { return std::log(w.mu(t)); };
  const auto left = local_mass(*fs, x, true, log_mu, 1.0, cfg);
  const auto right = local_mass(*fs, x, false, log_mu, 1.0, cfg);
  check_tail(left, x, cfg, "s_column_L1");
  check_tail(right, x, cfg, "s_column_L1");
  return fs->rho(x) * (left.value + right.value) / w.theta(x);
}

SBounds s_operator_bounds(const fss::FssAtlas& atlas, const HardyWeights& w,
                          const HardyConfig& cfg) {
  SBounds out;
  if (w.p == 1.0) {
    out.M = realline::sup_on_expanding_grid(
        [&](double x) { return s_column_L1(x, atlas, w, cfg); }, cfg.grid);
    out.argmax = out.M.argmax;
    out.bound.lower = out.M.estimate;
    if (out.M.trend == Trend::growing) {
      out.bound.upper = kInf;
      out.bound.method = "kernel-L1-unbounded";
    } else {
      out.bound.upper = out.M.estimate;
      out.bound.method = out.M.trend == Trend::bounded ? "kernel-L1-exact" : "kernel-L1-ungraded";
    }
    return out;
  }
  require_p_above_one(w.p, "s_operator_bounds");
  out.M = realline::sup_on_expanding_grid([&](double x) { return Mp_at(x, atlas, w, cfg); },
                                          cfg.grid);
  out.M_tilde = realline::sup_on_expanding_grid(
      [&](double x) { return Mp_tilde_at(x, atlas, w, cfg); }, cfg.grid);
  out.argmax = out.M.estimate >= out.M_tilde.estimate ? out.M.argmax : out.M_tilde.argmax;
  const double sum = out.M.estimate + out.M_tilde.estimate;
  out.bound.lower = 0.5 * sum;
  if (out.M.trend == Trend::growing || out.M_tilde.trend == Trend::growing) {
    out.bound.upper = kInf;
    out.bound.method = "muckenhoupt-pair-unbounded";
  } else {
    out.bound.upper = hardy_constant(w.p) * sum;
    const bool graded = out.M.trend == Trend::bounded && out.M_tilde.trend == Trend::bounded;
    out.bound.method = graded ? "muckenhoupt-pair-sandwich" : "muckenhoupt-pair-ungraded";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Empirical norms

std::vector<double> DiscreteOperator::apply(const std::vector<double>& f) const {
  const std::size_t n = size();
  std::vector<double> wf(n);
  for (std::size_t j = 0; j < n; ++j) wf[j] = weights[j] * f[j];
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = matrix.data() + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * wf[j];
    out[i] = acc;
  }
  return out;
}

DiscreteOperator discretize(const Kernel& K, double L, int n, double scale) {
  if (n < 2 || !(L > 0.0) || !(scale > 0.0)) throw PreconditionError("discretize: bad grid");
  const double umax = std::asinh(L / scale);
  DiscreteOperator op;
  const auto N = static_cast<std::size_t>(n);
  op.nodes.resize(N);
  op.weights.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double u0 = -umax + 2.0 * umax * static_cast<double>(i) / n;
    const double u1 = -umax + 2.0 * umax * static_cast<double>(i + 1) / n;
    const double x0 = scale * std::sinh(u0);
    const double x1 = scale * std::sinh(u1);
    op.nodes[i] = scale * std::sinh(0.5 * (u0 + u1));
    op.weights[i] = x1 - x0;
  }
  op.matrix.resize(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) op.matrix[i * N + j] = K(op.nodes[i], op.nodes[j]);
  }
  return op;
}

DiscreteOperator identity_operator(std::vector<double> nodes, std::vector<double> weights) {
  DiscreteOperator op{std::move(nodes), std::move(weights), {}};
  const std::size_t n = op.size();
  op.matrix.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) op.matrix[i * n + i] = 1.0 / op.weights[i];
  return op;
}

double discrete_norm(const DiscreteOperator& op, const std::vector<double>& f, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += op.weights[i] * std::pow(std::fabs(f[i]), p);
  return std::pow(acc, 1.0 / p);
}

EmpiricalNorm empirical_operator_norm(const DiscreteOperator& op, double p,
                                      const EmpiricalConfig& cfg) {
  if (!(p >= 1.0)) throw PreconditionError("empirical_operator_norm: p < 1");
  const std::size_t n = op.size();
  EmpiricalNorm best;
  std::vector<double> best_f;
  auto trial = [&](const std::vector<double>& f) {
    const double nf = discrete_norm(op, f, p);
    if (!(nf > 0.0)) return;
    ++best.trials;
    const double r = discrete_norm(op, op.apply(f), p) / nf;
    if (r > best.value) {
      best.value = r;
      best_f = f;
    }
  };

  // Spikes: every node for p = 1 (column masses), else the requested centres.
  auto spike = [&](std::size_t j) {
    std::vector<double> f(n, 0.0);
    f[j] = 1.0;
    trial(f);
  };
  if (p == 1.0) {
    for (std::size_t j = 0; j < n; ++j) spike(j);
  }
  for (double c : cfg.spike_centres) {
    const auto it = std::lower_bound(op.nodes.begin(), op.nodes.end(), c);
    spike(std::min<std::size_t>(static_cast<std::size_t>(it - op.nodes.begin()), n - 1));
  }
  trial(std::vector<double>(n, 1.0));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < cfg.random_trials; ++k) {
    std::vector<double> f(n);
    for (double& v : f) v = normal(rng);
    trial(f);
  }
  if (p == 1.0 || best_f.empty()) return best;

  // Nonlinear power iteration on g = w^(1/p) f, matrix A = w^(1/p) K w^(1-1/p).
  const double pp = p / (p - 1.0);
  auto psi = [](double z, double e) { return std::copysign(std::pow(std::fabs(z), e - 1.0), z); };
  std::vector<double> wp(n), wq(n);
  for (std::size_t i = 0; i < n; ++i) {
    wp[i] = std::pow(op.weights[i], 1.0 / p);
    wq[i] = std::pow(op.weights[i], 1.0 - 1.0 / p);
  }
  auto run_power = [&](std::vector<double> f) {
    std::vector<double> g(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = wp[i] * std::fabs(f[i]);
    for (int it = 0; it < cfg.power_iterations; ++it) {
      // y = A g
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = op.matrix.data() + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * wq[j] * g[j];
        y[i] = wp[i] * acc;
      }
      // z = A^T psi_p(y)
      std::fill(z.begin(), z.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double yi = wp[i] * psi(y[i], p);
        const double* row = op.matrix.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) z[j] += row[j] * yi;
      }
      double norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        g[j] = psi(z[j] * wq[j], pp);
        norm += std::pow(std::fabs(g[j]), p);
      }
      norm = std::pow(norm, 1.0 / p);
      if (!(norm > 0.0)) return;
      for (double& v : g) v /= norm;
      std::vector<double> f_next(n);
      for (std::size_t i = 0; i < n; ++i) f_next[i] = g[i] / wp[i];
      trial(f_next);
    }
  };
  run_power(best_f);
  run_power(std::vector<double>(n, 1.0));
  return best;
}

}  // namespace sladm::hardy
