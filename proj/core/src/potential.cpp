#include "sladm/potential.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sladm/error.hpp"

namespace sladm::localscale {

using realline::integrate;

QuadratureConfig potential_quadrature() {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-15;
  cfg.max_subdivisions = 20000;
  return cfg;
}

namespace {

// int_0^T (T - s) (g(x + s) + g(x - s)) ds
template <class G>
double triangle_by_quadrature(const G& g, double x, double half_width,
                              const QuadratureConfig& cfg) {
  if (half_width <= 0.0) return 0.0;
  auto kernel = [&](double s) { return (half_width - s) * (g(x + s) + g(x - s)); };
  return integrate(kernel, 0.0, half_width, cfg).value;
}

class ExpressionPotential final : public Potential {
 public:
  ExpressionPotential(RealFunction q, QuadratureConfig cfg)
      : q_(std::move(q)), cfg_(cfg) {}

  double value(double x) const override { return q_(x); }

  double integral(double a, double b) const override {
    return integrate([this](double t) { return q_(t); }, a, b, cfg_).value;
  }

  double triangle(double x, double half_width) const override {
    return triangle_by_quadrature([this](double t) { return q_(t); }, x,
                                  half_width, cfg_);
  }

  std::string description() const override { return q_.source(); }

 private:
  RealFunction q_;
  QuadratureConfig cfg_;
};

class ExpressionPart final : public PotentialPart {
 public:
  ExpressionPart(RealFunction q2, QuadratureConfig cfg) : q2_(std::move(q2)), cfg_(cfg) {}

  double value(double x) const override { return q2_(x); }

  double integral(double a, double b) const override {
    return integrate([this](double t) { return q2_(t); }, a, b, cfg_).value;
  }

  double moment(double a, double b) const override {
    return integrate([this](double t) { return t * q2_(t); }, a, b, cfg_).value;
  }

  std::string description() const override { return q2_.source(); }

 private:
  RealFunction q2_;
  QuadratureConfig cfg_;
};

class SplitPotential final : public Potential {
 public:
  SplitPotential(Decomposition parts, QuadratureConfig cfg)
      : parts_(std::move(parts)), cfg_(cfg) {}

  double value(double x) const override {
    return parts_.q1(x) + parts_.q2->value(x);
  }

  double integral(double a, double b) const override {
    const double smooth =
        integrate([this](double t) { return parts_.q1(t); }, a, b, cfg_).value;
    return smooth + parts_.q2->integral(a, b);
  }

  double triangle(double x, double half_width) const override {
    if (half_width <= 0.0) return 0.0;
    const double smooth = triangle_by_quadrature(
        [this](double t) { return parts_.q1(t); }, x, half_width, cfg_);
    const double T = half_width;
    const auto& q2 = *parts_.q2;
    const double right = (T + x) * q2.integral(x, x + T) - q2.moment(x, x + T);
    const double left = (T - x) * q2.integral(x - T, x) + q2.moment(x - T, x);
    return smooth + right + left;
  }

  std::string description() const override {
    return "(" + parts_.q1.source() + ") + (" + parts_.q2->description() + ")";
  }

  const Decomposition* decomposition() const noexcept override { return &parts_; }

 private:
  Decomposition parts_;
  QuadratureConfig cfg_;
};

// h0 = (1 + x^2)^(-1/2) and h1 = x h0 with their first two derivatives.
struct Envelope {
  double h, dh, d2h;
};

Envelope envelope(int which, double x) {
  const double w = 1.0 + x * x;
  const double s = std::sqrt(w);
  const double w3 = w * s;      // w^(3/2)
  const double w5 = w3 * w;     // w^(5/2)
  if (which == 0) return {1.0 / s, -x / w3, (2.0 * x * x - 1.0) / w5};
  return {x / s, 1.0 / w3, -3.0 * x / w5};
}

// Antiderivative of cos(e^x) h(x) for x >= cutoff, accurate to O(e^-3x).
double oscillatory_primitive(int which, double x) {
  if (x > 40.0) return 0.0;  // |value| < e^-40
  const Envelope e = envelope(which, x);
  const double ex = std::exp(x);
  const double emx = 1.0 / ex;
  const double p1 = e.dh - e.h;
  const double p2 = e.d2h - 3.0 * e.dh + 2.0 * e.h;
  const double s = std::sin(ex);
  const double c = std::cos(ex);
  return emx * (s * e.h + c * emx * p1 - s * emx * emx * p2);
}

class ExpCosinePart final : public PotentialPart {
 public:
  explicit ExpCosinePart(double cutoff) : cutoff_(cutoff) {
    if (!(cutoff > 0.0)) throw PreconditionError("exp_cosine_part: cutoff must be > 0");
    cells_ = static_cast<std::size_t>(std::ceil(2.0 * cutoff_ * kKnotsPerUnit));
    step_ = 2.0 * cutoff_ / static_cast<double>(cells_);
    c0_.assign(cells_ + 1, 0.0);
    c1_.assign(cells_ + 1, 0.0);
    for (std::size_t i = 0; i < cells_; ++i) {
      const double a = knot(i);
      const double b = knot(i + 1);
      c0_[i + 1] = c0_[i] + cell(0, a, b);
      c1_[i + 1] = c1_[i] + cell(1, a, b);
    }
  }

  double value(double x) const override {
    if (std::fabs(x) > cutoff_) return 0.0;
    return raw(x);
  }

  double integral(double a, double b) const override { return piecewise(0, a, b); }
  double moment(double a, double b) const override { return piecewise(1, a, b); }

  std::string description() const override { return "cos(exp(abs(x)))/sqrt(1+x^2)"; }

 private:
  static constexpr double kKnotsPerUnit = 1024.0;

  static double raw(double x) {
    return std::cos(std::exp(std::fabs(x))) / std::sqrt(1.0 + x * x);
  }

  double knot(std::size_t i) const {
    return -cutoff_ + static_cast<double>(i) * step_;
  }

  static double cell(int which, double a, double b) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-17;
    cfg.max_subdivisions = 2000;
    auto f = [which](double x) { return which == 0 ? raw(x) : x * raw(x); };
    return integrate(f, a, b, cfg).value;
  }

  // int_{-cutoff}^{x} for |x| <= cutoff
  double inner_primitive(int which, double x) const {
    const auto& table = which == 0 ? c0_ : c1_;
    const double pos = (x + cutoff_) / step_;
    std::size_t i = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(cells_)));
    if (i >= cells_) i = cells_ - 1;
    const double left = knot(i);
    const double right = knot(i + 1);
    // Integrate over the shorter part of the cell.
    if (x - left <= right - x) return table[i] + cell(which, left, x);
    return table[i + 1] - cell(which, x, right);
  }

  // int over [a, b] subset of [cutoff, inf) (or its mirror image)
  static double outer(int which, double a, double b) {
    return oscillatory_primitive(which, b) - oscillatory_primitive(which, a);
  }

  double piecewise(int which, double a, double b) const {
    if (!(a <= b)) throw PreconditionError("integral bounds must satisfy a <= b");
    double total = 0.0;
    // Left of -cutoff: substitute s = -x; h0 is even, h1 is odd.
    if (a < -cutoff_) {
      const double hi = std::min(b, -cutoff_);
      const double v = outer(which, -hi, -a);
      total += which == 0 ? v : -v;
    }
    const double lo = std::max(a, -cutoff_);
    const double hi = std::min(b, cutoff_);
    if (lo < hi) {
      if (hi - lo <= step_) {
        total += cell(which, lo, hi);
      } else {
        total += inner_primitive(which, hi) - inner_primitive(which, lo);
      }
    }
    if (b > cutoff_) total += outer(which, std::max(a, cutoff_), b);
    return total;
  }

  double cutoff_;
  std::size_t cells_ = 0;
  double step_ = 0.0;
  std::vector<double> c0_;
  std::vector<double> c1_;
};

}  // namespace

PotentialPtr expression_potential(RealFunction q, QuadratureConfig cfg) {
  return std::make_shared<ExpressionPotential>(std::move(q), cfg);
}

PotentialPtr split_potential(RealFunction q1, RealFunction q1pp, RealFunction q2,
                             QuadratureConfig cfg) {
  auto part = std::make_shared<ExpressionPart>(std::move(q2), cfg);
  return split_potential(std::move(q1), std::move(q1pp), std::move(part), cfg);
}

PotentialPtr split_potential(RealFunction q1, RealFunction q1pp,
                             std::shared_ptr<const PotentialPart> q2,
                             QuadratureConfig cfg) {
  return std::make_shared<SplitPotential>(
      Decomposition{std::move(q1), std::move(q1pp), std::move(q2)}, cfg);
}

std::shared_ptr<const PotentialPart> exp_cosine_part(double cutoff) {
  return std::make_shared<ExpCosinePart>(cutoff);
}

PotentialPtr example6_potential(double cutoff) {
  return split_potential(realline::parse_function("1/sqrt(1+x^2)"),
                         realline::parse_function("(2*x^2-1)/(1+x^2)^(5/2)"),
                         exp_cosine_part(cutoff));
}

}  // namespace sladm::localscale
