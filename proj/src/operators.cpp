#include "lorentz/operators.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <stdexcept>

#include "lorentz/kernels.hpp"

namespace lorentz {

namespace {

void require_positive(double t, const char* what) {
  if (!(t > 0.0)) throw std::invalid_argument(std::string(what) + ": t must be > 0");
}

}  // namespace

double hardy(const StepFunction& f, double t) {
  require_positive(t, "hardy");
  return f.primitive(t) / t;
}

double hardy(const Weight& w, double t) {
  require_positive(t, "hardy");
  return w.W(t) / t;
}

double hardy(const DecreasingProfile& f, double t) {
  require_positive(t, "hardy");
  return f.primitive(t) / t;
}

double hardy(const Integrand& f, double t, std::span<const double> breakpoints) {
  require_positive(t, "hardy");
  return integrate(f, 0.0, t, breakpoints).value / t;
}

QuadResult adjoint_hardy(const StepFunction& f, double t) {
  require_positive(t, "adjoint_hardy");
  QuadResult q;
  q.pieces_used = f.size();
  double left = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double lo = std::max(left, t);
    const double hi = f.breakpoints()[i];
    left = hi;
    if (hi > lo) q.value += f.values()[i] * std::log(hi / lo);
  }
  return q;
}

QuadResult adjoint_hardy(const Weight& w, double t) {
  require_positive(t, "adjoint_hardy");
  return w.tail_moment(t, 1.0);
}

double maximal(const DecreasingProfile& f_star, double t) {
  require_positive(t, "maximal");
  return f_star.maximal(t);
}

double hardy_char_levelset(double r, double lambda, const Weight& w) {
  if (!(r > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("hardy_char_levelset: r and lambda must be > 0");
  if (lambda >= 1.0) return 0.0;
  return w.W(r / lambda);
}

QuadResult hardy_adjoint_composite(const Weight& v, double r) {
  require_positive(r, "hardy_adjoint_composite");
  QuadResult q = v.tail_moment(r, 1.0);
  q.value += v.W(r) / r;
  return q;
}

}  // namespace lorentz

namespace lorentz {

std::vector<double> primitive_on_grid(const Weight& w, const std::vector<double>& grid) {
  if (grid.empty()) return {};
  if (w.has_closed_primitive()) return kernels::parallel::map(grid, [&](double t) { return w.W(t); });
  const auto bps = w.breakpoints();
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  const auto f = [&](double s) { return w(s); };
  const auto pieces = kernels::parallel::panels<double>(
      grid, [&](double a, double b) { return integrate(f, a, b, bps, opts).value; });
  std::vector<double> out(grid.size());
  out[0] = integrate(f, 0.0, grid[0], bps, opts).value;
  for (std::size_t k = 1; k < grid.size(); ++k) out[k] = out[k - 1] + pieces[k - 1];
  return out;
}

std::vector<QuadResult> tail_on_grid(const Weight& w, const std::vector<double>& grid, double p) {
  std::vector<QuadResult> out(grid.size());
  if (grid.empty()) return out;
  if (w.has_closed_tail(p)) {
    return kernels::parallel::tabulate<QuadResult>(grid.size(), [&](std::size_t k) { return w.tail_moment(grid[k], p); });
  }
  const auto bps = w.breakpoints();
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  const auto f = [&](double s) { return w(s) * std::pow(s, -p); };
  const double end = w.support_end();
  const auto pieces = kernels::parallel::panels<double>(
      grid, [&](double a, double b) {
        if (a >= end) return 0.0;
        return integrate(f, a, std::min(b, end), bps, opts).value;
      });
  out.back() = w.tail_moment(grid.back(), p);
  for (std::size_t k = grid.size() - 1; k-- > 0;) {
    out[k] = out[k + 1];
    out[k].value += pieces[k];
  }
  return out;
}

}  // namespace lorentz
