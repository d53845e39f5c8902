#pragma once

#include "lorentz/profile.hpp"
#include "lorentz/quadrature.hpp"
#include "lorentz/step_function.hpp"
#include "lorentz/weight.hpp"

namespace lorentz {

/// Sf(t) = (1/t)∫_0^t f. Exact on step functions.
double hardy(const StepFunction& f, double t);
double hardy(const Weight& w, double t);
double hardy(const DecreasingProfile& f, double t);
/// Sf(t) for a generic handle, by quadrature over the declared breakpoints.
double hardy(const Integrand& f, double t, std::span<const double> breakpoints = {});

/// S*f(t) = ∫_t^∞ f(s)/s ds with a divergence flag. Exact on step functions.
QuadResult adjoint_hardy(const StepFunction& f, double t);
QuadResult adjoint_hardy(const Weight& w, double t);

/// f**(t) = S(f*)(t), from the exact primitive of the profile.
double maximal(const DecreasingProfile& f_star, double t);

/// w({t : Sχ_(0,r)(t) > λ}) = W(r/λ) for λ < 1, 0 for λ >= 1.
double hardy_char_levelset(double r, double lambda, const Weight& w);

/// S(S*v)(r) = (1/r)∫_0^r v + ∫_r^∞ v(s)/s ds, with the divergence flag of
/// the tail.
QuadResult hardy_adjoint_composite(const Weight& v, double r);

/// W on a sorted grid: closed form where available, else a prefix sum of
/// panel integrals between consecutive grid points.
std::vector<double> primitive_on_grid(const Weight& w, const std::vector<double>& grid);

/// ∫_{t_k}^∞ w(s)s^{-p} ds on a sorted grid: closed form where available,
/// else the tail beyond the last point plus a suffix sum of panel integrals.
/// Every entry is flagged diverged when the outermost tail diverges.
std::vector<QuadResult> tail_on_grid(const Weight& w, const std::vector<double>& grid, double p);

}  // namespace lorentz
