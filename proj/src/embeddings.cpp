#include "lorentz/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lorentz/kernels.hpp"
#include "lorentz/operators.hpp"

namespace lorentz {

using nlohmann::json;

namespace {

json finite_or_string(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

enum class Orientation { Sandwich, Eqwv };

struct TwoSidedScan {
  std::vector<double> grid;
  std::vector<double> ratio;
  bool diverged = false;
  double diverged_at = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t i1 = 0;
  std::size_t i2 = 0;
};

TwoSidedScan scan_two_sided(const Weight& w, const Weight& v, double q, Orientation o,
                            const std::vector<double>& grid) {
  TwoSidedScan s;
  s.grid = grid;
  const auto W = primitive_on_grid(w, grid);
  const auto V = primitive_on_grid(v, grid);
  const auto T = tail_on_grid(v, grid, q);
  s.ratio.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (T[k].diverged && !s.diverged) {
      s.diverged = true;
      s.diverged_at = grid[k];
    }
    const double r = grid[k];
    const double rhs = V[k] + std::pow(r, q) * T[k].value;
    s.ratio[k] = o == Orientation::Sandwich ? kernels::detail::safe_ratio(rhs, std::pow(W[k], q))
                                            : kernels::detail::safe_ratio(W[k], rhs);
  }
  const auto [lo, hi] = std::minmax_element(s.ratio.begin(), s.ratio.end());
  s.c1 = *lo;
  s.c2 = *hi;
  s.i1 = static_cast<std::size_t>(lo - s.ratio.begin());
  s.i2 = static_cast<std::size_t>(hi - s.ratio.begin());
  return s;
}

void set_extreme_witness(EmbeddingVerdict& v, const TwoSidedScan& s) {
  const bool low = std::abs(std::log(s.c1)) > std::abs(std::log(s.c2));
  const std::size_t k = low ? s.i1 : s.i2;
  v.witness_r = s.grid[k];
  v.witness_ratio = s.ratio[k];
}

EmbeddingVerdict decide_two_sided(const std::string& relation, const std::vector<TwoSidedScan>& rounds,
                                  const RunConfig& cfg) {
  EmbeddingVerdict v;
  v.relation = relation;
  v.c1 = kInf;
  v.c2 = 0.0;
  for (const auto& s : rounds) {
    v.rounds.emplace_back(s.c1, s.c2);
    v.c1 = std::min(v.c1, s.c1);
    v.c2 = std::max(v.c2, s.c2);
  }
  for (const auto& s : rounds) {
    if (s.diverged) {
      v.status = EmbeddingStatus::Fails;
      v.reason = "divergent tail";
      v.witness_r = s.diverged_at;
      v.witness_ratio = kInf;
      return v;
    }
  }
  for (const auto& s : rounds) {
    if (!(s.c1 > 0.0) || !std::isfinite(s.c2)) {
      v.status = EmbeddingStatus::Fails;
      v.reason = !(s.c1 > 0.0) ? "ratio vanishes" : "ratio unbounded";
      set_extreme_witness(v, s);
      return v;
    }
  }
  const auto& base = rounds.front();
  for (const auto& s : rounds) {
    if (s.c2 / s.c1 > cfg.blow_up_threshold) {
      v.status = EmbeddingStatus::Fails;
      v.reason = "two-sided constants spread beyond the blow-up threshold";
      set_extreme_witness(v, s);
      return v;
    }
  }
  for (std::size_t k = 1; k < rounds.size(); ++k) {
    const auto& s = rounds[k];
    if (s.c2 > (1.0 + cfg.stability) * base.c2 || s.c1 < base.c1 / (1.0 + cfg.stability)) {
      v.status = EmbeddingStatus::Fails;
      v.reason = "constants not stable under refinement";
      set_extreme_witness(v, s);
      return v;
    }
  }
  v.status = EmbeddingStatus::Holds;
  return v;
}

std::vector<TwoSidedScan> three_scans(const Weight& w, const Weight& v, double q, Orientation o,
                                      const RunConfig& cfg) {
  cfg.validate();
  std::vector<TwoSidedScan> rounds;
  rounds.push_back(scan_two_sided(w, v, q, o, log_grid(cfg.grid_min, cfg.grid_max, cfg.per_decade)));
  if (cfg.refinement_rounds >= 1)
    rounds.push_back(scan_two_sided(w, v, q, o, log_grid(cfg.grid_min, cfg.grid_max, 2 * cfg.per_decade)));
  if (cfg.refinement_rounds >= 2)
    rounds.push_back(scan_two_sided(w, v, q, o, log_grid(cfg.ext_min, cfg.ext_max, 2 * cfg.per_decade)));
  return rounds;
}

struct Fit {
  double slope = 0.0;
  double r2 = 0.0;
};

Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
    syy += y[k] * y[k];
  }
  const double vx = n * sxx - sx * sx;
  const double vy = n * syy - sy * sy;
  Fit f;
  if (vx <= 0.0) return f;
  f.slope = (n * sxy - sx * sy) / vx;
  f.r2 = vy > 0.0 ? (n * sxy - sx * sy) * (n * sxy - sx * sy) / (vx * vy) : 1.0;
  return f;
}

}  // namespace

std::string status_name(EmbeddingStatus s) {
  switch (s) {
    case EmbeddingStatus::Holds: return "Holds";
    case EmbeddingStatus::Fails: return "Fails";
    case EmbeddingStatus::Evidence: return "Evidence";
  }
  return "?";
}

json FamilyEvidence::to_json() const {
  json r = json::array();
  for (double x : ratios) r.push_back(finite_or_string(x));
  return {{"family", family},
          {"params", params},
          {"ratios", r},
          {"sup", finite_or_string(sup)},
          {"growth_exponent", growth_exponent},
          {"r2", r2},
          {"regressor", regressor},
          {"label", label}};
}

json EmbeddingVerdict::to_json() const {
  json j = {{"relation", relation}, {"status", status_name(status)}};
  if (status == EmbeddingStatus::Holds) {
    j["constants"] = {{"c1", c1}, {"c2", c2}};
  } else {
    j["observed"] = {{"c1", finite_or_string(c1)}, {"c2", finite_or_string(c2)}};
  }
  if (witness_r) j["witness"] = {{"r", *witness_r}, {"ratio", finite_or_string(witness_ratio)}};
  if (!reason.empty()) j["reason"] = reason;
  json rs = json::array();
  for (const auto& [a, b] : rounds) rs.push_back({finite_or_string(a), finite_or_string(b)});
  j["rounds"] = rs;
  if (evidence) j["evidence"] = evidence->to_json();
  return j;
}

EmbeddingVerdict check_sandwich(const Weight& w, const Weight& v, double q, const RunConfig& cfg) {
  if (!(q > 1.0)) throw std::invalid_argument("check_sandwich: q must be > 1");
  return decide_two_sided("sandwich", three_scans(w, v, q, Orientation::Sandwich, cfg), cfg);
}

EmbeddingVerdict check_eqwv(const Weight& w, const Weight& v, const RunConfig& cfg) {
  return decide_two_sided("eqwv", three_scans(w, v, 1.0, Orientation::Eqwv, cfg), cfg);
}

EmbeddingVerdict check_eqwv_range(const Weight& w, const Weight& v, double lo, double hi, const RunConfig& cfg) {
  return decide_two_sided("eqwv", {scan_two_sided(w, v, 1.0, Orientation::Eqwv, log_grid(lo, hi, cfg.per_decade))},
                          cfg);
}

std::vector<double> geometric_params(int max_power) {
  std::vector<double> s;
  for (int k = 1; k <= max_power; ++k) s.push_back(std::ldexp(1.0, k));
  return s;
}

EmbeddingVerdict norm_ratio_evidence(const NormSpec& source, const NormSpec& target, const WitnessFamily& family,
                                     const RunConfig& cfg, std::optional<double> threshold) {
  if (family.params.empty()) throw std::invalid_argument("norm_ratio_evidence: empty witness family");
  FamilyEvidence ev;
  ev.family = family.name;
  ev.params = family.params;
  // Each member is evaluated independently; NaN marks a degenerate source.
  std::vector<char> diverged(family.params.size(), 0);
  ev.ratios = kernels::parallel::map(family.params, [&](double s) {
    const DecreasingProfile f = family.make(s);
    const NormValue a = evaluate(source, f, cfg);
    if (a.diverged || !(a.value > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const NormValue b = evaluate(target, f, cfg);
    return b.diverged ? kInf : b.value / a.value;
  });
  const bool target_diverged =
      std::any_of(ev.ratios.begin(), ev.ratios.end(), [](double r) { return std::isinf(r); });

  // Growth is fitted over the upper half of the family, where the ratio is
  // in its asymptotic regime.
  std::vector<double> xs1, xs2, ys;
  ev.sup = 0.0;
  double lo = kInf;
  const std::size_t n = ev.params.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double r = ev.ratios[k];
    if (std::isnan(r)) continue;
    ev.sup = std::max(ev.sup, r);
    lo = std::min(lo, r);
    if (2 * k + 1 >= n && r > 0.0 && std::isfinite(r) && ev.params[k] > 1.0) {
      xs1.push_back(std::log(ev.params[k]));
      xs2.push_back(std::log1p(std::log(ev.params[k])));
      ys.push_back(std::log(r));
    }
  }
  if (ys.size() >= 3) {
    const Fit a = linear_fit(xs1, ys);
    const Fit b = linear_fit(xs2, ys);
    const Fit& best = b.r2 > a.r2 ? b : a;
    ev.growth_exponent = best.slope;
    ev.r2 = best.r2;
    ev.regressor = b.r2 > a.r2 ? "log(1 + log s)" : "log s";
  }
  const double thr = threshold.value_or(cfg.blow_up_threshold);
  const bool grows = ev.growth_exponent > 0.0 && ev.r2 >= 0.99 && ev.sup > thr;
  // Bounded: the last member exceeds the middle of the family by at most
  // the stability margin.
  bool flat = false;
  if (ys.size() >= 3) flat = std::exp(ys.back()) <= (1.0 + cfg.stability) * std::exp(ys.front());
  if (target_diverged || grows) {
    ev.label = "strictness demonstrated";
  } else if (flat) {
    ev.label = "boundedness evidence";
  } else {
    ev.label = "not demonstrated";
  }
  EmbeddingVerdict v;
  v.relation = "ratio";
  v.status = EmbeddingStatus::Evidence;
  v.c1 = lo;
  v.c2 = ev.sup;
  v.reason = source.label() + " -> " + target.label();
  v.evidence = std::move(ev);
  return v;
}

DecreasingProfile witness_banachaq(double a, double s) {
  if (!(a > 0.0) || !(s > 1.0)) throw std::invalid_argument("witness_banachaq: need a > 0 and s > 1");
  return DecreasingProfile::decay({a, 1.0, 0.0, a, s * a});
}

DecreasingProfile runobancg_witness(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("runobancg_witness: need 0 < alpha < 1");
  return DecreasingProfile::decay({1.0, 1.0, 1.0 / alpha, std::numbers::e, kInf});
}

double runobancg_lambda1_partial(double alpha, double T) {
  return runobancg_witness(alpha).primitive(T);
}

double runobancg_gamma1_alpha_partial(double alpha, double T) {
  const double e = std::numbers::e;
  if (!(T > e)) return 0.0;
  const DecreasingProfile f = runobancg_witness(alpha);
  const auto h = [&](double s) {
    const double u = 1.0 + s;
    const double t = std::exp(u);
    const double fs = std::pow(u, -1.0 / alpha);  // t·f*(t)
    const double fss = f.primitive(t);           // t·f**(t)
    return std::pow(fs, alpha) * std::pow(fss, 1.0 - alpha);
  };
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  return integrate(h, 0.0, std::log(T) - 1.0, {}, opts).value;
}

}  // namespace lorentz
