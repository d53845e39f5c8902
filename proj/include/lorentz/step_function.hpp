#pragma once

#include <span>
#include <vector>

namespace lorentz {

/// Finite nonnegative step function on (0, ∞).
///
/// Equals values[i] on [t_{i-1}, t_i) with t_{-1} = 0, and 0 on [t_n, ∞).
/// Construction canonicalizes: adjacent equal values are merged and trailing
/// zero pieces are dropped.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double t) const;
  /// ∫_0^t f, exact.
  double primitive(double t) const;
  double integral() const { return primitive(support_end()); }
  /// Lebesgue measure of {f > lambda}.
  double measure_above(double lambda) const;

  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double support_end() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
  bool is_nonincreasing() const;

  /// Pointwise power, f^p for p > 0.
  StepFunction pow(double p) const;
  StepFunction scaled(double k) const;
  friend StepFunction operator+(const StepFunction& f, const StepFunction& g);

  bool operator==(const StepFunction&) const = default;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

}  // namespace lorentz
