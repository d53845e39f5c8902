#include "lorentz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lorentz/config.hpp"

namespace lorentz {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
constexpr unsigned kMaxDepth = 18;

struct Piece {
  double value;
  double error;
  double l1;
};

Piece gk21(const Integrand& f, double a, double b) {
  Piece p{};
  p.value = GK::integrate(f, a, b, 0, 0.0, &p.error, &p.l1);
  return p;
}

// Bisection driven by the Kronrod error estimate. A split that does not
// reduce the estimate means the integrand is noise-limited (cancellation in
// its evaluation), and refining further only burns evaluations.
Piece adapt(const Integrand& f, double a, double b, const Piece& whole, double tol, unsigned depth) {
  if (whole.error <= tol * whole.l1 || depth == 0 || !std::isfinite(whole.value)) return whole;
  const double m = 0.5 * (a + b);
  const Piece left = gk21(f, a, m);
  const Piece right = gk21(f, m, b);
  if (left.error + right.error >= 0.9 * whole.error) {
    return {left.value + right.value, std::max(whole.error, left.error + right.error), left.l1 + right.l1};
  }
  const Piece l = adapt(f, a, m, left, tol, depth - 1);
  const Piece r = adapt(f, m, b, right, tol, depth - 1);
  return {l.value + r.value, l.error + r.error, l.l1 + r.l1};
}

QuadResult gk(const Integrand& f, double a, double b, double tol) {
  const Piece p = adapt(f, a, b, gk21(f, a, b), tol, kMaxDepth);
  return {p.value, p.error, false, 1};
}

// ∫_a^b f(t) dt = ∫_{log a}^{log b} f(e^u) e^u du, 0 < a < b.
QuadResult gk_log(const Integrand& f, double a, double b, double tol) {
  const Integrand g = [&f](double u) {
    const double t = std::exp(u);
    return f(t) * t;
  };
  return gk(g, std::log(a), std::log(b), tol);
}

QuadResult tanh_sinh_from_zero(const Integrand& f, double b, double tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  double l1 = 0.0;
  try {
    const double v = ts.integrate(f, 0.0, b, tol, &err, &l1);
    if (std::isfinite(v)) return {v, err, false, 1};
  } catch (const std::exception&) {
  }
  // Fall back to logarithmic panels shrinking to the origin.
  QuadResult acc;
  double hi = b;
  for (int k = 0; k < 200 && hi > 1e-300; ++k) {
    const double lo = hi * 0.125;
    const QuadResult piece = gk_log(f, lo, hi, tol);
    acc += piece;
    if (std::abs(piece.value) <= tol * std::abs(acc.value) * 1e-3 && k > 4) break;
    hi = lo;
  }
  acc.pieces_used = 1;
  return acc;
}

}  // namespace

QuadResult& QuadResult::operator+=(const QuadResult& other) {
  value += other.value;
  abs_error += other.abs_error;
  diverged = diverged || other.diverged;
  pieces_used += other.pieces_used;
  return *this;
}

void RunConfig::validate() const {
  if (!(grid_min > 0.0) || !(grid_min < grid_max))
    throw std::invalid_argument("grid: require 0 < grid_min < grid_max");
  if (!(ext_min > 0.0) || ext_min > grid_min || ext_max < grid_max)
    throw std::invalid_argument("grid: extended horizon must contain [grid_min, grid_max]");
  if (per_decade <= 0 || sup_per_decade <= 0)
    throw std::invalid_argument("grid: points per decade must be positive");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(norm_tol > 0.0) || !(stability > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (!(blow_up_threshold > 1.0)) throw std::invalid_argument("threshold must exceed 1");
  if (horizon_doublings < 4) throw std::invalid_argument("horizon_doublings must be >= 4");
}

std::vector<double> panel_cuts(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(lo < hi) || per_decade <= 0)
    throw std::invalid_argument("log_grid: require 0 < lo < hi and per_decade > 0");
  const double decades = std::log10(hi / lo);
  const auto n = static_cast<std::size_t>(std::ceil(decades * per_decade - 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    g[k] = lo * std::pow(10.0, decades * static_cast<double>(k) / static_cast<double>(n));
  g.front() = lo;
  g.back() = hi;
  return g;
}

QuadResult integrate_panel(const Integrand& f, double a, double b, double rel_tol) {
  if (a == 0.0) {
    if (b > 1.0) {
      QuadResult r = tanh_sinh_from_zero(f, 1.0, rel_tol);
      r += gk_log(f, 1.0, b, rel_tol);
      r.pieces_used = 1;
      return r;
    }
    return tanh_sinh_from_zero(f, b, rel_tol);
  }
  if (b / a > 4.0) return gk_log(f, a, b, rel_tol);
  return gk(f, a, b, rel_tol);
}

QuadResult integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                     const QuadOptions& opts) {
  if (!(a >= 0.0) || !(b > a) || std::isnan(b))
    throw std::invalid_argument("integrate: require 0 <= a < b");

  QuadResult total;
  const bool infinite = std::isinf(b);
  double finite_end = b;
  if (infinite) {
    finite_end = std::max(a, 1.0);
    for (double x : breakpoints)
      if (std::isfinite(x)) finite_end = std::max(finite_end, x);
  }

  if (finite_end > a) {
    const auto cuts = panel_cuts(a, finite_end, breakpoints);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      total += integrate_panel(f, cuts[k], cuts[k + 1], opts.rel_tol);
  }
  if (!infinite) return total;

  // Geometric horizon: panels [X, 2X] starting at finite_end.
  double x = finite_end;
  double inc_prev = -1.0;
  double rho_prev = -1.0;
  double rho_prev2 = -1.0;
  for (int k = 1; k <= opts.horizon_doublings; ++k) {
    const QuadResult panel = integrate_panel(f, x, 2.0 * x, opts.rel_tol);
    x *= 2.0;
    total += panel;
    const double inc = panel.value;
    const double scale = std::abs(total.value);

    if (k >= 2 && inc == 0.0 && inc_prev == 0.0) return total;

    double rho = -1.0;
    if (inc_prev > 0.0 && inc >= 0.0) rho = inc / inc_prev;
    const bool small = std::abs(inc) <= opts.rel_tol * scale + opts.abs_tol;
    const bool geometric = k >= 4 && rho >= 0.0 && rho < 1.0 - 1e-6 && rho_prev >= 0.0 &&
                           rho_prev2 >= 0.0 && std::abs(rho - rho_prev) <= 1e-7 * rho &&
                           std::abs(rho_prev - rho_prev2) <= 1e-7 * rho;
    if ((k >= 2 && small) || geometric) {
      if (rho >= 0.0 && rho < 1.0) {
        const double tail = inc * rho / (1.0 - rho);
        total.value += tail;
        total.abs_error += std::abs(tail) * std::max(opts.rel_tol, std::abs(rho - rho_prev));
      }
      return total;
    }
    rho_prev2 = rho_prev;
    rho_prev = rho;
    inc_prev = inc;
  }
  total.diverged = true;
  total.abs_error = kInf;
  return total;
}

}  // namespace lorentz
