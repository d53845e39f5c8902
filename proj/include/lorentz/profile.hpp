#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lorentz/quadrature.hpp"
#include "lorentz/step_function.hpp"

namespace lorentz {

/// t ↦ c·t^{-a}·(log t)^{-b} on (t0, t1), constant cap c·t0^{-a}(log t0)^{-b}
/// on (0, t0], zero on [t1, ∞).
struct DecayParams {
  double c = 1.0;
  double a = 0.0;
  double b = 0.0;
  double t0 = 0.0;
  double t1 = kInf;

  double cap() const;
  bool operator==(const DecayParams&) const = default;
};

/// A nonincreasing right-continuous function on (0, ∞): the f* every norm
/// consumes. Immutable handle; copies share the underlying node.
class DecreasingProfile {
 public:
  enum class Kind { Step, Decay, Sum, Scaled };

  /// The zero profile.
  DecreasingProfile();

  static DecreasingProfile step(StepFunction f);
  static DecreasingProfile decay(const DecayParams& params);
  static DecreasingProfile sum(std::vector<DecreasingProfile> terms);
  static DecreasingProfile scaled(double k, DecreasingProfile inner);

  Kind kind() const;
  double operator()(double t) const;
  /// ∫_0^t f*, t may be +∞; returns +∞ when the integral diverges.
  double primitive(double t) const;
  /// f**(t) = (1/t)∫_0^t f*.
  double maximal(double t) const;

  std::vector<double> breakpoints() const;
  /// Right end of the support (+∞ when unbounded).
  double support_end() const;
  bool is_zero() const;

  /// (f*)^p when it stays inside the closed families (not for sums).
  std::optional<DecreasingProfile> pow(double p) const;

  const StepFunction* as_step() const;
  const DecayParams* as_decay() const;
  std::span<const DecreasingProfile> terms() const;
  double scale() const;
  const DecreasingProfile* inner() const;

 private:
  struct Node;
  explicit DecreasingProfile(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Decreasing rearrangement of a step function (a DecreasingStep).
DecreasingProfile rearrange(const StepFunction& f);

/// Closed-form or log-variable integral of the decay piece over [x0, x1],
/// x1 possibly +∞ (returns +∞ on divergence).
double decay_integral(const DecayParams& d, double x0, double x1);

}  // namespace lorentz
