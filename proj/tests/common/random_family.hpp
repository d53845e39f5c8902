#pragma once

// Seeded generators for random step functions, profiles and family weights
// shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lorentz/profile.hpp"
#include "lorentz/step_function.hpp"
#include "lorentz/weight.hpp"

namespace lorentz::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

/// Step function with 1..8 pieces on log-uniform breakpoints in (1e-3, 1e3),
/// values in [0, 5] (not necessarily monotone).
inline StepFunction random_step(Rng& rng) {
  const int n = 1 + pick(rng, 8);
  std::vector<double> b(n), v(n);
  for (auto& x : b) x = std::pow(10.0, uniform(rng, -3.0, 3.0));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  v.resize(b.size());
  for (auto& x : v) x = uniform(rng, 0.0, 5.0);
  return StepFunction(b, v);
}

/// Decreasing step profile with 1..8 pieces and strictly positive values.
inline DecreasingProfile random_decreasing_step(Rng& rng) {
  const int n = 1 + pick(rng, 8);
  std::vector<double> b(n), v(n);
  for (auto& x : b) x = std::pow(10.0, uniform(rng, -3.0, 3.0));
  for (auto& x : v) x = uniform(rng, 0.05, 5.0);
  std::sort(b.begin(), b.end());
  std::sort(v.rbegin(), v.rend());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  v.resize(b.size());
  return DecreasingProfile::step(StepFunction(b, v));
}

/// Decay profile c·t^{-a}(log t)^{-b} capped at t0, possibly truncated.
inline DecreasingProfile random_decay(Rng& rng) {
  DecayParams d;
  d.c = uniform(rng, 0.2, 3.0);
  d.a = uniform(rng, 0.3, 2.5);
  d.b = 0.0;
  d.t0 = std::pow(10.0, uniform(rng, -2.0, 1.0));
  d.t1 = pick(rng, 2) == 0 ? kInf : d.t0 * std::pow(10.0, uniform(rng, 0.5, 3.0));
  return DecreasingProfile::decay(d);
}

/// Weight drawn from the closed families (not necessarily decreasing).
inline Weight random_family_weight(Rng& rng) {
  switch (pick(rng, 7)) {
    case 0: return Weight::power(uniform(rng, -0.9, 2.0));
    case 1: {
      const double a = uniform(rng, 0.0, 0.5);
      return Weight::characteristic(a, a + uniform(rng, 0.2, 5.0));
    }
    case 2: return Weight::exponential(uniform(rng, 0.5, 2.0), uniform(rng, 0.2, 3.0));
    case 3: return Weight::shifted_power(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), -uniform(rng, 0.5, 3.0));
    case 4: return Weight::log_poly({1.0, -1.0}, 0.0, 0.0, 1.0);
    case 5: return Weight::sum({Weight::constant(uniform(rng, 0.1, 1.0)), Weight::power(-uniform(rng, 0.1, 0.9))});
    default: return Weight::power(uniform(rng, -0.5, 1.0), 0.0, uniform(rng, 0.5, 10.0));
  }
}

/// Decreasing weight drawn from the closed families.
inline Weight random_decreasing_weight(Rng& rng) {
  switch (pick(rng, 6)) {
    case 0: return Weight::power(-uniform(rng, 0.05, 0.95));
    case 1: return Weight::characteristic(0.0, uniform(rng, 0.1, 10.0));
    case 2: return Weight::exponential(uniform(rng, 0.5, 2.0), uniform(rng, 0.2, 3.0));
    case 3: return Weight::shifted_power(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), -uniform(rng, 0.5, 3.0));
    case 4: return Weight::log_poly({1.0, -1.0}, 0.0, 0.0, 1.0);
    default: return Weight::sum({Weight::constant(uniform(rng, 0.1, 1.0)), Weight::power(-uniform(rng, 0.1, 0.9))});
  }
}

/// Weight whose R_p verdict is decidable on the default grids: power weights
/// away from the boundary band (p−1, p−0.6), characteristic and decreasing
/// weights (members), and t^{p−1} itself.
inline Weight random_decidable_weight(Rng& rng, double p) {
  switch (pick(rng, 5)) {
    case 0: return Weight::power(uniform(rng, -0.9, p - 1.0));
    case 1: return Weight::power(uniform(rng, p - 0.5, p + 2.0));
    case 2: return Weight::characteristic(0.0, uniform(rng, 0.1, 10.0));
    case 3: return random_decreasing_weight(rng);
    default: return Weight::power(p - 1.0, 0.0, kInf, uniform(rng, 0.5, 2.0));
  }
}

}  // namespace lorentz::testing
