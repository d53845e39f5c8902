#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace lorentz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Outcome of a one-dimensional integral on (a, b) ⊆ (0, ∞).
///
/// When `diverged` is set the geometric-horizon probe never stabilized and
/// `value` holds the partial integral up to the horizon.
struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool diverged = false;
  std::size_t pieces_used = 0;

  QuadResult& operator+=(const QuadResult& other);
};

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-300;
  int horizon_doublings = 60;
};

using Integrand = std::function<double(double)>;

/// Integrates a nonnegative piecewise-smooth function over [a, b], b possibly
/// +∞. Declared breakpoints split the domain into smooth panels. The panel
/// touching the origin uses tanh-sinh (endpoint singularities), wide panels
/// are integrated in the logarithmic variable, and an infinite tail is walked
/// in doubling panels [X, 2X] with a geometric extrapolation of power-like
/// remainders. Throws std::invalid_argument unless 0 <= a < b.
QuadResult integrate(const Integrand& f, double a, double b,
                     std::span<const double> breakpoints = {},
                     const QuadOptions& opts = {});

/// Integral over one smooth panel [a, b], 0 <= a < b < ∞.
QuadResult integrate_panel(const Integrand& f, double a, double b, double rel_tol);

/// Sorted, deduplicated cut points of [a, b] that include every breakpoint
/// strictly inside the interval.
std::vector<double> panel_cuts(double a, double b, std::span<const double> breakpoints);

/// Log-spaced grid from lo to hi (both included) at `per_decade` points.
std::vector<double> log_grid(double lo, double hi, int per_decade);

}  // namespace lorentz
