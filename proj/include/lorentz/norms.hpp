#pragma once

#include <string>

#include <json.hpp>

#include "lorentz/config.hpp"
#include "lorentz/profile.hpp"
#include "lorentz/weight.hpp"

namespace lorentz {

/// Exponents of the norm functionals: 0 < p < ∞, 0 < q <= ∞, 0 <= α <= p.
struct NormParams {
  double p = 1.0;
  double q = kInf;
  double alpha = 0.0;

  void validate() const;
};

/// A norm value; when `diverged` is set, `value` is the partial value at the
/// truncation horizon.
struct NormValue {
  double value = 0.0;
  bool diverged = false;
  double abs_error = 0.0;

  nlohmann::json to_json() const;
};

/// (∫ (f*)^p w)^{1/p}.
NormValue lambda_norm(const DecreasingProfile& f, const Weight& w, double p, const RunConfig& cfg = {});
/// sup_t f*(t)·W(t)^{1/p}.
NormValue lambda_weak_norm(const DecreasingProfile& f, const Weight& w, double p, const RunConfig& cfg = {});
/// (∫ (f**)^q W^{q/p−1} w)^{1/q}, q < ∞.
NormValue gamma_norm(const DecreasingProfile& f, const Weight& w, double p, double q, const RunConfig& cfg = {});
/// sup_t f**(t)·W(t)^{1/p}.
NormValue gamma_weak_norm(const DecreasingProfile& f, const Weight& w, double p, const RunConfig& cfg = {});
/// (∫ (f*)^α (f**)^{p−α} w)^{1/p}, with 0^0 = 1.
NormValue gamma_alpha_norm(const DecreasingProfile& f, const Weight& w, double p, double alpha,
                           const RunConfig& cfg = {});

enum class Space { Lambda, LambdaWeak, Gamma, GammaWeak, GammaAlpha };

std::string space_name(Space s);
/// Accepts lambda, lambda-weak, gamma, gamma-weak, gamma-alpha.
Space parse_space(const std::string& name);

/// A norm functional bound to its weight: Gamma with q = ∞ means GammaWeak.
struct NormSpec {
  Space space;
  NormParams params;
  Weight w;

  std::string label() const;
  nlohmann::json to_json() const;
};

NormValue evaluate(const NormSpec& spec, const DecreasingProfile& f, const RunConfig& cfg = {});

/// Supremum of a continuous-from-the-left function on (0, ∞): coarse log
/// scan over the extended horizon, candidate points just left of every
/// breakpoint, then a fine scan and golden-section refinement around the best
/// point. Flags `diverged` when the best point sits at the horizon edge and
/// the function is still rising there.
NormValue sup_search(const std::function<double(double)>& phi, std::span<const double> breakpoints,
                     const RunConfig& cfg);

}  // namespace lorentz
