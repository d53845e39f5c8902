#include "lorentz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lorentz/kernels.hpp"

namespace lorentz {

using nlohmann::json;

namespace {

std::vector<double> merged_breakpoints(const DecreasingProfile& f, const Weight& w) {
  std::vector<double> b = f.breakpoints();
  const auto wb = w.breakpoints();
  b.insert(b.end(), wb.begin(), wb.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

void check_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("norm: p must be finite and > 0");
}

NormValue root(const QuadResult& r, double p) {
  NormValue v;
  v.value = std::pow(std::max(r.value, 0.0), 1.0 / p);
  v.diverged = r.diverged;
  if (r.diverged) {
    v.abs_error = kInf;
  } else if (r.value > 0.0) {
    v.abs_error = v.value * r.abs_error / (p * r.value);
  }
  return v;
}

QuadResult integrate_norm(const Integrand& g, double end, std::span<const double> bps, const RunConfig& cfg) {
  if (!(end > 0.0)) return {};
  QuadOptions opts;
  opts.rel_tol = cfg.norm_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.horizon_doublings = cfg.horizon_doublings;
  return integrate(g, 0.0, end, bps, opts);
}

}  // namespace

void NormParams::validate() const {
  check_p(p);
  if (!(q > 0.0)) throw std::invalid_argument("norm: q must be > 0");
  if (!(alpha >= 0.0) || alpha > p) throw std::invalid_argument("norm: alpha must lie in [0, p]");
}

json NormValue::to_json() const {
  json j = {{"value", value}, {"diverged", diverged}};
  j["abs_error"] = std::isfinite(abs_error) ? json(abs_error) : json("inf");
  return j;
}

NormValue lambda_norm(const DecreasingProfile& f, const Weight& w, double p, const RunConfig& cfg) {
  check_p(p);
  if (f.is_zero()) return {};
  if (const auto* s = f.as_step()) {
    QuadResult acc;
    double w_left = 0.0;
    for (std::size_t i = 0; i < s->size(); ++i) {
      const double right = s->breakpoints()[i];
      const double w_right = w.W(right);
      acc.value += std::pow(s->values()[i], p) * (w_right - w_left);
      w_left = w_right;
    }
    return root(acc, p);
  }
  if (const auto c = w.constant_value()) {
    // Constant weight: c·∫(f*)^p in closed form, including slowly convergent tails.
    if (const auto fp = f.pow(p)) {
      const double total = *c == 0.0 ? 0.0 : *c * fp->primitive(kInf);
      QuadResult r;
      r.diverged = std::isinf(total);
      r.value = r.diverged ? *c * fp->primitive(std::ldexp(1.0, cfg.horizon_doublings)) : total;
      return root(r, p);
    }
  }
  const double end = std::min(f.support_end(), w.support_end());
  const auto bps = merged_breakpoints(f, w);
  const auto g = [&](double t) {
    const double wt = w(t);
    if (wt == 0.0) return 0.0;
    return std::pow(f(t), p) * wt;
  };
  return root(integrate_norm(g, end, bps, cfg), p);
}

NormValue lambda_weak_norm(const DecreasingProfile& f, const Weight& w, double p, const RunConfig& cfg) {
  check_p(p);
  if (f.is_zero()) return {};
  if (const auto* s = f.as_step()) {
    // f* is constant on each piece and W increases, so the supremum over a
    // piece is its left limit at the right endpoint.
    NormValue v;
    for (std::size_t i = 0; i < s->size(); ++i)
      v.value = std::max(v.value, s->values()[i] * std::pow(w.W(s->breakpoints()[i]), 1.0 / p));
    return v;
  }
  const auto bps = merged_breakpoints(f, w);
  return sup_search([&](double t) { return f(t) * std::pow(w.W(t), 1.0 / p); }, bps, cfg);
}

NormValue gamma_norm(const DecreasingProfile& f, const Weight& w, double p, double q, const RunConfig& cfg) {
  check_p(p);
  if (!(q > 0.0)) throw std::invalid_argument("norm: q must be > 0");
  if (std::isinf(q)) return gamma_weak_norm(f, w, p, cfg);
  if (f.is_zero()) return {};
  const double e = q / p - 1.0;
  const auto bps = merged_breakpoints(f, w);
  const auto term = [&](double t, double wt, double W) {
    if (wt == 0.0 || W <= 0.0) return 0.0;
    const double m = f.maximal(t);
    if (m == 0.0) return 0.0;
    return std::pow(m, q) * (e == 0.0 ? 1.0 : std::pow(W, e)) * wt;
  };
  const auto g = [&](double t) { return term(t, w(t), w.W(t)); };
  // For q < p the factor W^{q/p-1} is singular where W leaves zero. When that
  // happens at s0 > 0, integrate in x = t - s0 so the singular end sits at the
  // origin panel, which handles endpoint singularities.
  double s0 = 0.0;
  if (e < 0.0)
    for (double b : w.breakpoints())
      if (b > s0 && std::isfinite(b) && w.W(b) == 0.0) s0 = b;
  if (s0 > 0.0) {
    std::vector<double> shifted;
    for (double b : bps)
      if (b > s0) shifted.push_back(b - s0);
    const double end = w.support_end() - s0;
    // Within 1e-8 relative of s0 the primitive is w(s0+)x to first order,
    // which keeps W^{q/p-1} accurate where s0 + x rounds to s0.
    const double right_of_s0 = std::nextafter(s0, kInf);
    const auto h = [&](double x) {
      const double t = s0 + x;
      if (x >= 1e-8 * s0) return g(t);
      const double wt = w(std::max(t, right_of_s0));
      return term(std::max(t, right_of_s0), wt, wt * x);
    };
    return root(integrate_norm(h, end, shifted, cfg), q);
  }
  return root(integrate_norm(g, w.support_end(), bps, cfg), q);
}

NormValue gamma_weak_norm(const DecreasingProfile& f, const Weight& w, double p, const RunConfig& cfg) {
  check_p(p);
  if (f.is_zero()) return {};
  const auto bps = merged_breakpoints(f, w);
  return sup_search([&](double t) { return f.maximal(t) * std::pow(w.W(t), 1.0 / p); }, bps, cfg);
}

NormValue gamma_alpha_norm(const DecreasingProfile& f, const Weight& w, double p, double alpha,
                           const RunConfig& cfg) {
  NormParams{p, kInf, alpha}.validate();
  if (f.is_zero()) return {};
  const double end = alpha > 0.0 ? std::min(f.support_end(), w.support_end()) : w.support_end();
  const auto bps = merged_breakpoints(f, w);
  const auto g = [&](double t) {
    const double wt = w(t);
    if (wt == 0.0) return 0.0;
    const double a = alpha == 0.0 ? 1.0 : std::pow(f(t), alpha);
    if (a == 0.0) return 0.0;
    const double b = alpha == p ? 1.0 : std::pow(f.maximal(t), p - alpha);
    return a * b * wt;
  };
  return root(integrate_norm(g, end, bps, cfg), p);
}

std::string space_name(Space s) {
  switch (s) {
    case Space::Lambda: return "lambda";
    case Space::LambdaWeak: return "lambda-weak";
    case Space::Gamma: return "gamma";
    case Space::GammaWeak: return "gamma-weak";
    case Space::GammaAlpha: return "gamma-alpha";
  }
  return "?";
}

Space parse_space(const std::string& name) {
  for (Space s : {Space::Lambda, Space::LambdaWeak, Space::Gamma, Space::GammaWeak, Space::GammaAlpha})
    if (space_name(s) == name) return s;
  throw std::invalid_argument("unknown space '" + name +
                              "' (expected lambda, lambda-weak, gamma, gamma-weak or gamma-alpha)");
}

std::string NormSpec::label() const {
  std::string s = space_name(space) + "(p=" + json(params.p).dump();
  if (space == Space::Gamma) s += ", q=" + (std::isinf(params.q) ? std::string("inf") : json(params.q).dump());
  if (space == Space::GammaAlpha) s += ", alpha=" + json(params.alpha).dump();
  return s + ")";
}

json NormSpec::to_json() const {
  json j = {{"space", space_name(space)}, {"p", params.p}, {"weight", w.to_json()}};
  if (space == Space::Gamma) j["q"] = std::isinf(params.q) ? json("inf") : json(params.q);
  if (space == Space::GammaAlpha) j["alpha"] = params.alpha;
  return j;
}

NormValue evaluate(const NormSpec& spec, const DecreasingProfile& f, const RunConfig& cfg) {
  switch (spec.space) {
    case Space::Lambda: return lambda_norm(f, spec.w, spec.params.p, cfg);
    case Space::LambdaWeak: return lambda_weak_norm(f, spec.w, spec.params.p, cfg);
    case Space::Gamma: return gamma_norm(f, spec.w, spec.params.p, spec.params.q, cfg);
    case Space::GammaWeak: return gamma_weak_norm(f, spec.w, spec.params.p, cfg);
    case Space::GammaAlpha: return gamma_alpha_norm(f, spec.w, spec.params.p, spec.params.alpha, cfg);
  }
  throw std::logic_error("evaluate: unknown space");
}

NormValue sup_search(const std::function<double(double)>& phi, std::span<const double> breakpoints,
                     const RunConfig& cfg) {
  std::vector<double> pts = log_grid(cfg.ext_min, cfg.ext_max, cfg.per_decade);
  const std::size_t coarse_n = pts.size();
  for (double b : breakpoints) {
    if (!(b > cfg.ext_min) || !(b < cfg.ext_max)) continue;
    pts.push_back(b * (1.0 - 1e-12));
    pts.push_back(b);
  }
  const auto vals = kernels::parallel::map(pts, phi);
  const auto best = kernels::parallel::argmax(vals);
  NormValue out;
  out.value = std::max(best.value, 0.0);
  double t_best = pts[best.index];

  // A maximum at either end of the coarse scan that is still rising means the
  // supremum lies beyond the horizon.
  if (best.index == 0 && vals[0] > vals[1] * (1.0 + 1e-9)) out.diverged = true;
  if (best.index == coarse_n - 1 && vals[coarse_n - 1] > vals[coarse_n - 2] * (1.0 + 1e-9)) out.diverged = true;
  if (out.diverged) {
    out.abs_error = kInf;
    return out;
  }

  const double lo = std::max(cfg.ext_min, t_best / 10.0);
  const double hi = std::min(cfg.ext_max, t_best * 10.0);
  if (lo < hi) {
    const auto fine = log_grid(lo, hi, cfg.sup_per_decade);
    const auto fv = kernels::parallel::map(fine, phi);
    const auto fb = kernels::parallel::argmax(fv);
    if (fb.value > out.value) {
      out.value = fb.value;
      t_best = fine[fb.index];
    }
    // Golden-section refinement on the bracketing fine cells, in log t.
    const std::size_t k = fb.index;
    double a = std::log(fine[k > 0 ? k - 1 : k]);
    double b = std::log(fine[k + 1 < fine.size() ? k + 1 : k]);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = phi(std::exp(x1));
    double f2 = phi(std::exp(x2));
    for (int it = 0; it < 60 && b - a > 1e-14; ++it) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = phi(std::exp(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = phi(std::exp(x2));
      }
      out.value = std::max({out.value, f1, f2});
    }
  }
  return out;
}

}  // namespace lorentz
