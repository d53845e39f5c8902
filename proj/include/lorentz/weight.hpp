#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "lorentz/quadrature.hpp"
#include "lorentz/step_function.hpp"

namespace lorentz {

enum class Smoothness { Discontinuous = 0, Continuous = 1, C1 = 2 };

namespace detail {
struct WeightNode;
}

/// A weight w on (0, ∞): nonnegative and locally integrable.
///
/// Weights are immutable handles over a small expression tree of closed
/// families (power / log-polynomial / characteristic / constant /
/// exponential / shifted power / step / tabulated) and combinators (sum,
/// product, dilation, offset, Φ-smoothing, the derived weight w_q). Every
/// node knows its breakpoints; families also supply a closed-form primitive
/// W, derivative, tail moment and limit at infinity where one exists, and
/// everything else falls back to quadrature.
class Weight {
 public:
  /// c·t^γ on (a, b).
  static Weight power(double gamma, double a = 0.0, double b = kInf, double c = 1.0);
  /// t^γ·Σ_k coeffs[k]·(log t)^k on (a, b).
  static Weight log_poly(std::vector<double> coeffs, double gamma, double a = 0.0, double b = kInf);
  static Weight characteristic(double a, double b);
  static Weight constant(double c);
  /// c·e^{-rate·t}.
  static Weight exponential(double c, double rate);
  /// c·(shift + t)^γ, shift > 0.
  static Weight shifted_power(double c, double shift, double gamma);
  static Weight step(StepFunction f);
  /// Linear interpolation on the grid, constant below it, and c·t^{-a} above
  /// it with a fitted on the last decade (or `tail_exponent` when given).
  static Weight tabulated(std::vector<double> grid, std::vector<double> values,
                          std::optional<double> tail_exponent = std::nullopt);
  static Weight sum(std::vector<Weight> terms);
  static Weight product(std::vector<Weight> terms);
  /// t ↦ w(c·t).
  static Weight dilated(Weight inner, double c);
  /// t ↦ w(t) − delta (delta <= inf w, typically w(∞)).
  static Weight offset(Weight inner, double delta);
  /// Φ-smoothing applied `depth` times: the result has primitive
  /// Φ(t) = (1/t)∫_t^{2t} W(s) ds.
  static Weight smoothed(Weight inner, int depth = 1);
  /// w_q(r) = −r^q d/dx(W^{q−1}w/x^{q−1})(r), from a weight with a derivative.
  static Weight wq(Weight base, double q);

  double operator()(double t) const;
  /// W(t) = ∫_0^t w.
  double W(double t) const;
  bool has_closed_primitive() const;
  /// c when the weight is the constant c on (0, ∞).
  std::optional<double> constant_value() const;
  /// w'(t) when the node supplies one (symbolic or via the smoothing formula).
  std::optional<double> derivative(double t) const;
  /// ∫_r^∞ w(s)·s^{-p} ds with divergence flag.
  QuadResult tail_moment(double r, double p) const;
  /// True when tail_moment(·, p) is a closed form rather than quadrature.
  bool has_closed_tail(double p) const;

  std::vector<double> breakpoints() const;
  Smoothness smoothness() const;
  double support_end() const;
  std::optional<double> closed_limit_at_infinity() const;

  /// Declared monotonicity if present, else 1000 log-spaced samples.
  bool is_decreasing() const;
  std::optional<bool> declared_decreasing() const { return declared_decreasing_; }
  Weight declare_decreasing(bool value) const;

  nlohmann::json to_json() const;
  const detail::WeightNode& node() const { return *node_; }

 private:
  explicit Weight(std::shared_ptr<const detail::WeightNode> node);
  std::shared_ptr<const detail::WeightNode> node_;
  std::optional<bool> declared_decreasing_;
};

/// Raw value of the w_q expression at r and a magnitude scale of its terms
/// (used to judge negative excursions).
struct WqTerms {
  double raw;
  double scale;
};
WqTerms wq_terms(double W, double w, double dw, double q, double r);

/// Sampled monotonicity: w(t_{k+1}) <= w(t_k) on 1000 log-spaced points.
bool sampled_decreasing(const Weight& w);

/// w(∞) for a decreasing weight (closed form where the family provides it,
/// else the infimum over t = 2^k, k <= 60); nullopt when w is not decreasing.
std::optional<double> limit_at_infinity(const Weight& w);

/// w(0+) probe for a decreasing weight: finite value or +∞.
double limit_at_zero(const Weight& w);

}  // namespace lorentz
