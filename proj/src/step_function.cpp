#include "lorentz/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lorentz {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.size() != values.size())
    throw std::invalid_argument("step function: breakpoints and values differ in length");
  double prev = 0.0;
  for (double t : breakpoints) {
    if (!std::isfinite(t) || !(t > prev))
      throw std::invalid_argument("step function: breakpoints must be finite, positive and strictly increasing");
    prev = t;
  }
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("step function: values must be finite and nonnegative");

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values_.empty() && values_.back() == values[i]) {
      breaks_.back() = breakpoints[i];
    } else {
      breaks_.push_back(breakpoints[i]);
      values_.push_back(values[i]);
    }
  }
  while (!values_.empty() && values_.back() == 0.0) {
    values_.pop_back();
    breaks_.pop_back();
  }
}

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  if (it == breaks_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double StepFunction::primitive(double t) const {
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (t <= left) break;
    acc += values_[i] * (std::min(t, breaks_[i]) - left);
    left = breaks_[i];
  }
  return acc;
}

double StepFunction::measure_above(double lambda) const {
  double m = 0.0;
  double left = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > lambda) m += breaks_[i] - left;
    left = breaks_[i];
  }
  return m;
}

bool StepFunction::is_nonincreasing() const {
  return std::is_sorted(values_.rbegin(), values_.rend());
}

StepFunction StepFunction::pow(double p) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(),
                 [p](double x) { return std::pow(x, p); });
  return {breaks_, std::move(v)};
}

StepFunction StepFunction::scaled(double k) const {
  if (!(k >= 0.0)) throw std::invalid_argument("step function: scale must be nonnegative");
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [k](double x) { return k * x; });
  return {breaks_, std::move(v)};
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  std::vector<double> cuts(f.breaks_);
  cuts.insert(cuts.end(), g.breaks_.begin(), g.breaks_.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> vals(cuts.size());
  double left = 0.0;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double mid = 0.5 * (left + cuts[i]);
    vals[i] = f(mid) + g(mid);
    left = cuts[i];
  }
  return {std::move(cuts), std::move(vals)};
}

}  // namespace lorentz
