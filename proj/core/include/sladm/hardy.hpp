#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sladm/expanding_grid.hpp"
#include "sladm/fundamental_system.hpp"
#include "sladm/quadrature.hpp"

namespace sladm::hardy {

using realline::GridConfig;
using realline::GridSup;
using realline::QuadratureConfig;
using realline::ScalarFn;
using realline::Trend;

/// Positive weights mu, theta and an exponent p >= 1.
struct HardyWeights {
  ScalarFn mu;
  ScalarFn theta;
  double p = 2.0;

  /// p / (p - 1), infinite for p = 1.
  double p_prime() const noexcept;
};

/// p^(1/p) p'^(1/p'); equals 1 for p = 1.
double hardy_constant(double p) noexcept;

/// Throws PreconditionError unless p >= 1 and both weights are positive and
/// finite at every probe.
void validate_weights(const HardyWeights& w, const std::vector<double>& probes);

struct NormBound {
  double lower = 0.0;
  double upper = 0.0;  // infinite when unbounded is indicated
  std::string method;
};

struct HardyConfig {
  QuadratureConfig quad = [] {
    QuadratureConfig c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-300;
    c.max_subdivisions = 20000;
    return c;
  }();
  GridConfig grid;
  /// Largest share of a local mass that may come from the frozen-rate tail
  /// beyond the integrated window before the value is declared inconclusive.
  double max_tail_fraction = 1e-2;
};

/// (int_{-inf}^x mu^p)^(1/p) (int_x^inf theta^p')^(1/p'); +inf when a factor
/// diverges, InconclusiveError when a tail cannot be graded. Requires p > 1.
double Hp_at(double x, const HardyWeights& w, const HardyConfig& cfg = {});

/// (int_{-inf}^x theta^p')^(1/p') (int_x^inf mu^p)^(1/p).
double Hp_tilde_at(double x, const HardyWeights& w, const HardyConfig& cfg = {});

struct HardyBound {
  NormBound bound;
  GridSup sup;
};

/// [H_p, c_p H_p] for f -> mu(t) int_t^inf theta f (or, with tilde, the
/// left-sided operator) where H_p is the expanding-grid sup.
HardyBound hardy_norm_bounds(const HardyWeights& w, bool tilde = false,
                             const HardyConfig& cfg = {});

using Kernel = std::function<double(double, double)>;

/// sup_s int_a^b |K(s, t)| dt. Infinite ends use improper quadrature and the
/// expanding grid; a finite interval is sampled at `samples` interior points.
GridSup kernel_L1_norm(const Kernel& K, double a, double b, const HardyConfig& cfg = {},
                       int samples = 101);

/// rho(x) [int_{-inf}^x mu^p e^{p(log v(t) - log v(x))}]^(1/p)
///        [int_x^inf theta^-p' e^{p'(log u(t) - log u(x))}]^(1/p'),
/// which is (int_{-inf}^x (mu v)^p)^(1/p) (int_x^inf (u/theta)^p')^(1/p').
double Mp_at(double x, const fss::FssAtlas& atlas, const HardyWeights& w,
             const HardyConfig& cfg = {});

/// (int_{-inf}^x (v/theta)^p')^(1/p') (int_x^inf (mu u)^p)^(1/p).
double Mp_tilde_at(double x, const fss::FssAtlas& atlas, const HardyWeights& w,
                   const HardyConfig& cfg = {});

/// theta(x)^-1 int mu(t) G(t, x) dt: the column mass of the kernel of S.
double s_column_L1(double x, const fss::FssAtlas& atlas, const HardyWeights& w,
                   const HardyConfig& cfg = {});

struct SBounds {
  NormBound bound;
  GridSup M;        // sup of M_p, or of the column mass for p = 1
  GridSup M_tilde;  // empty for p = 1
  double argmax = 0.0;
  bool tail_model_used = true;
};

/// Bounds on the norm of f -> mu(x) int G(x,t) theta(t)^-1 f(t) dt on L_p.
/// For p > 1: [(M + M~)/2, c_p (M + M~)]; for p = 1 the exact kernel norm.
SBounds s_operator_bounds(const fss::FssAtlas& atlas, const HardyWeights& w,
                          const HardyConfig& cfg = {});

// ---------------------------------------------------------------------------
// Empirical norms of discretized operators

/// (K f)(x_i) = sum_j K_ij w_j f_j on nodes x with quadrature weights w, and
/// ||f||_p = (sum_i w_i |f_i|^p)^(1/p).
struct DiscreteOperator {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> matrix;  // row-major, nodes.size()^2

  std::size_t size() const noexcept { return nodes.size(); }
  std::vector<double> apply(const std::vector<double>& f) const;
};

/// Midpoint discretization of K on n cells of x = scale sinh(u), u uniform,
/// covering [-L, L]. The kernel is sampled at cell midpoints (including the
/// diagonal).
DiscreteOperator discretize(const Kernel& K, double L, int n, double scale = 1.0);

/// Identity on the given nodes (K_ij = delta_ij / w_j).
DiscreteOperator identity_operator(std::vector<double> nodes, std::vector<double> weights);

double discrete_norm(const DiscreteOperator& op, const std::vector<double>& f, double p);

struct EmpiricalConfig {
  int random_trials = 16;
  int power_iterations = 200;
  std::uint64_t seed = 0;
  std::vector<double> spike_centres;  // abscissae for structured spikes
};

struct EmpiricalNorm {
  double value = 0.0;
  int trials = 0;
};

/// Largest observed ||K f|| / ||f|| over random, spike and smooth test
/// vectors, refined by the nonlinear power iteration for l_p matrix norms.
/// Always a lower bound for the discrete norm.
EmpiricalNorm empirical_operator_norm(const DiscreteOperator& op, double p,
                                      const EmpiricalConfig& cfg = {});

}  // namespace sladm::hardy
