#pragma once

#include <memory>
#include <optional>
#include <string>

#include "sladm/expression.hpp"
#include "sladm/quadrature.hpp"

namespace sladm::localscale {

using realline::QuadratureConfig;
using realline::RealFunction;

/// The part q2 of a split potential q = q1 + q2. Integrals are exact up to
/// quadrature error; `value` may be an effective (truncated) model.
class PotentialPart {
 public:
  virtual ~PotentialPart() = default;
  virtual double value(double x) const = 0;
  /// int_a^b q2
  virtual double integral(double a, double b) const = 0;
  /// int_a^b xi q2(xi) dxi
  virtual double moment(double a, double b) const = 0;
  virtual std::string description() const = 0;
};

/// q = q1 + q2 with q1 positive and q1'' known.
struct Decomposition {
  RealFunction q1;
  RealFunction q1pp;
  std::shared_ptr<const PotentialPart> q2;
};

/// A potential q of the equation -y'' + q y = f.
///
/// `value` is what the ODE integrator sees; `integral` and `triangle` are
/// the averaged quantities behind d(x) and d^(x).
class Potential {
 public:
  virtual ~Potential() = default;

  virtual double value(double x) const = 0;

  /// int_a^b q, a <= b.
  virtual double integral(double a, double b) const = 0;

  /// int_{x-T}^{x+T} (T - |xi - x|) q(xi) dxi, which equals
  /// int_0^T int_{x-t}^{x+t} q(xi) dxi dt.
  virtual double triangle(double x, double half_width) const = 0;

  virtual std::string description() const = 0;

  virtual const Decomposition* decomposition() const noexcept { return nullptr; }
};

using PotentialPtr = std::shared_ptr<const Potential>;

/// Tolerances used for the averages inside every potential.
QuadratureConfig potential_quadrature();

PotentialPtr expression_potential(RealFunction q,
                                  QuadratureConfig cfg = potential_quadrature());

/// q = q1 + q2 where q2 is an arbitrary expression integrated numerically.
PotentialPtr split_potential(RealFunction q1, RealFunction q1pp, RealFunction q2,
                             QuadratureConfig cfg = potential_quadrature());

PotentialPtr split_potential(RealFunction q1, RealFunction q1pp,
                             std::shared_ptr<const PotentialPart> q2,
                             QuadratureConfig cfg = potential_quadrature());

/// q2(x) = cos(e^|x|) / sqrt(1 + x^2).
///
/// Inside |x| <= cutoff the primitives of q2 and x q2 are tabulated on knots
/// of spacing 1/1024; partial cells and everything beyond the cutoff use
/// quadrature and a three-term integration by parts in e^|x| respectively.
/// The pointwise value is zero beyond the cutoff: there q2 oscillates faster
/// than any ODE step can follow while its integrals are O(e^-|x|).
std::shared_ptr<const PotentialPart> exp_cosine_part(double cutoff = 10.0);

/// q = 1/sqrt(1+x^2) + cos(e^|x|)/sqrt(1+x^2).
PotentialPtr example6_potential(double cutoff = 10.0);

}  // namespace sladm::localscale
