#pragma once

#include <cstdint>
#include <string>

namespace lorentz {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchema = "lorentz-lab/1";

/// Grid, tolerance and verdict settings shared by every scan in the library.
///
/// Certifiers scan a log-spaced grid [grid_min, grid_max] at `per_decade`
/// points per decade, then repeat once at doubled density and once over the
/// extended horizon [ext_min, ext_max] before committing to a verdict.
struct RunConfig {
  double grid_min = 1e-6;
  double grid_max = 1e6;
  int per_decade = 64;
  double ext_min = 1e-12;
  double ext_max = 1e12;
  int refinement_rounds = 2;

  double rel_tol = 1e-9;        // integrate(): relative tolerance
  double abs_tol = 1e-300;      // integrate(): absolute floor
  double norm_tol = 1e-12;      // per-panel tolerance inside norm evaluation
  int horizon_doublings = 60;   // tail horizon 2^60

  double blow_up_threshold = 1e3;
  double stability = 0.05;      // allowed growth of an observed constant

  int sup_per_decade = 512;     // grid fallback for supremum norms
  std::uint64_t seed = 20240601;

  void validate() const;
};

}  // namespace lorentz
