#include "lorentz/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lorentz/embeddings.hpp"
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

}  // namespace

json EquivalenceReport::to_json(bool with_samples) const {
  json j = {{"c1", finite_or_string(c1)},
            {"c2", finite_or_string(c2)},
            {"grid", {{"min", grid_min}, {"max", grid_max}, {"per_decade", per_decade}, {"points", grid.size()}}},
            {"pass", pass}};
  if (!failure.empty()) j["failure"] = failure;
  if (witness_r) j["witness_r"] = *witness_r;
  if (with_samples) {
    json s = json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) s.push_back({grid[k], finite_or_string(ratios[k])});
    j["samples"] = s;
  }
  return j;
}

json WqResult::to_json() const {
  return {{"q", q},
          {"source", source.to_json()},
          {"w_q", wq.to_json()},
          {"smoothing_depth", depth},
          {"clamped", clamped},
          {"sampled", sampled},
          {"verification", verification.to_json()}};
}

EquivalenceReport verify_ecuwq(const Weight& w, const Weight& wq, double q, const RunConfig& cfg,
                               std::optional<ScanRange> range, double max_spread) {
  if (!(q >= 1.0)) throw std::invalid_argument("verify_ecuwq: q must be >= 1");
  EquivalenceReport rep;
  rep.grid_min = range ? range->first : cfg.grid_min;
  rep.grid_max = range ? range->second : cfg.grid_max;
  rep.per_decade = cfg.per_decade;
  rep.grid = log_grid(rep.grid_min, rep.grid_max, cfg.per_decade);
  const auto W = primitive_on_grid(w, rep.grid);
  const auto V = primitive_on_grid(wq, rep.grid);
  const auto T = tail_on_grid(wq, rep.grid, q);
  rep.ratios.resize(rep.grid.size());
  for (std::size_t k = 0; k < rep.grid.size(); ++k) {
    if (T[k].diverged) {
      rep.failure = "tail of w_q(x)/x^q diverges";
      rep.witness_r = rep.grid[k];
      rep.c1 = 0.0;
      rep.c2 = kInf;
      rep.ratios[k] = kInf;
      return rep;
    }
    const double r = rep.grid[k];
    rep.ratios[k] = kernels::detail::safe_ratio(V[k] + std::pow(r, q) * T[k].value, std::pow(W[k], q));
  }
  const auto [lo, hi] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
  rep.c1 = *lo;
  rep.c2 = *hi;
  const auto worst = std::abs(std::log(rep.c1)) > std::abs(std::log(rep.c2)) ? lo : hi;
  rep.witness_r = rep.grid[static_cast<std::size_t>(worst - rep.ratios.begin())];
  if (!(rep.c1 > 0.0)) {
    rep.failure = "ratio vanishes";
  } else if (!std::isfinite(rep.c2)) {
    rep.failure = "ratio unbounded";
  } else if (rep.c2 / rep.c1 > max_spread) {
    rep.failure = "constants spread beyond the allowed distortion";
  } else {
    rep.pass = true;
  }
  return rep;
}

WqResult build_wq(const Weight& w, double q, const RunConfig& cfg) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("build_wq: q must be >= 1");
  if (!w.is_decreasing()) throw std::domain_error("build_wq: the weight must be decreasing");
  const auto w_inf = limit_at_infinity(w);
  if (!w_inf || *w_inf > 0.0)
    throw std::domain_error("build_wq: the construction requires w(inf) = 0, got " +
                            (w_inf ? std::to_string(*w_inf) : std::string("unknown")));

  int depth = 0;
  switch (w.smoothness()) {
    case Smoothness::C1: depth = 0; break;
    case Smoothness::Continuous: depth = 1; break;
    case Smoothness::Discontinuous: depth = 2; break;
  }
  const Weight base = depth == 0 ? w : Weight::smoothed(w, depth);
  const Weight wq = Weight::wq(base, q);

  WqResult res{.q = q, .source = w, .wq = wq};
  res.depth = depth;
  res.table_grid = log_grid(cfg.grid_min, cfg.grid_max, 64);
  std::vector<double> raw(res.table_grid.size());
  std::vector<double> scale(res.table_grid.size());
  kernels::parallel::map(res.table_grid, [&](double t) {
    const auto k = static_cast<std::size_t>(
        std::lower_bound(res.table_grid.begin(), res.table_grid.end(), t) - res.table_grid.begin());
    const auto d = base.derivative(t);
    const auto terms = wq_terms(base.W(t), base(t), d ? *d : 0.0, q, t);
    raw[k] = terms.raw;
    scale[k] = terms.scale;
    return 0.0;
  });
  res.table_values.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] < -1e-8 * scale[k]) ++res.clamped;
    res.table_values[k] = std::max(0.0, raw[k]);
  }
  res.sampled = raw.size();
  if (res.clamped * 100 > res.sampled)
    throw std::runtime_error("build_wq: " + std::to_string(res.clamped) + " of " + std::to_string(res.sampled) +
                             " samples of w_q are negative; differentiation is not accurate enough");

  const double spread = depth == 0 ? (1.0 + 1e-6) / (1.0 - 1e-6) : std::pow(4.0, depth * q);
  res.verification = verify_ecuwq(w, wq, q, cfg, std::nullopt, spread);
  return res;
}

std::string lambda1_case_name(Lambda1Case c) {
  switch (c) {
    case Lambda1Case::I: return "i";
    case Lambda1Case::II: return "ii";
    case Lambda1Case::III: return "iii";
    case Lambda1Case::Inconclusive: return "inconclusive";
  }
  return "?";
}

json Lambda1Result::to_json() const {
  json j = {{"case", lambda1_case_name(which)},
            {"w_inf", finite_or_string(w_inf)},
            {"w_zero", finite_or_string(w_zero)}};
  switch (which) {
    case Lambda1Case::I: j["form"] = "Gamma1(v)"; break;
    case Lambda1Case::II: j["form"] = "L1"; break;
    case Lambda1Case::III: j["form"] = "Gamma1(v) cap L1"; break;
    case Lambda1Case::Inconclusive: break;
  }
  if (v) j["v"] = v->to_json();
  if (u) j["u"] = u->to_json();
  if (eqwv) j["eqwv"] = eqwv->to_json();
  if (!note.empty()) j["note"] = note;
  return j;
}

Lambda1Result lambda1_equivalent_norm(const Weight& w, const RunConfig& cfg) {
  Lambda1Result res;
  if (!w.is_decreasing()) {
    res.note = "weight is not decreasing";
    return res;
  }
  res.w_inf = *limit_at_infinity(w);
  res.w_zero = limit_at_zero(w);
  if (res.w_inf == 0.0) {
    res.which = Lambda1Case::I;
    res.v = build_wq(w, 1.0, cfg).wq;
    res.eqwv = std::make_shared<EmbeddingVerdict>(check_eqwv(w, *res.v, cfg));
    return res;
  }
  if (std::isfinite(res.w_zero)) {
    res.which = Lambda1Case::II;
    res.note = "norm equivalent to sup_t t f**(t)";
    return res;
  }
  res.which = Lambda1Case::III;
  res.u = Weight::offset(w, res.w_inf).declare_decreasing(true);
  res.v = build_wq(*res.u, 1.0, cfg).wq;
  res.eqwv = std::make_shared<EmbeddingVerdict>(check_eqwv(*res.u, *res.v, cfg));
  return res;
}

Weight paper_v_char01() {
  return Weight::sum({Weight::log_poly({std::log(4.0), 1.0}, -2.0, 0.25, 0.5),
                      Weight::log_poly({0.0, -1.0}, -2.0, 0.5, 1.0)});
}

}  // namespace lorentz
