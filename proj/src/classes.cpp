#include "lorentz/classes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lorentz/kernels.hpp"
#include "lorentz/operators.hpp"

namespace lorentz {

using nlohmann::json;

namespace {

json finite_or_string(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

void check_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("certifier: p must be finite and > 0");
}

std::vector<detail::ScanResult> three_rounds(
    const RunConfig& cfg, const std::function<detail::ScanResult(const std::vector<double>&)>& scan) {
  cfg.validate();
  std::vector<detail::ScanResult> rounds;
  rounds.push_back(scan(log_grid(cfg.grid_min, cfg.grid_max, cfg.per_decade)));
  if (cfg.refinement_rounds >= 1)
    rounds.push_back(scan(log_grid(cfg.grid_min, cfg.grid_max, 2 * cfg.per_decade)));
  if (cfg.refinement_rounds >= 2)
    rounds.push_back(scan(log_grid(cfg.ext_min, cfg.ext_max, 2 * cfg.per_decade)));
  return rounds;
}

}  // namespace

std::string class_name(ClassId c) {
  switch (c) {
    case ClassId::Bp: return "Bp";
    case ClassId::Rp: return "Rp";
    case ClassId::RestrictedWeakType: return "RestrictedWeakType";
    case ClassId::QuasiDecreasingPrimitive: return "QuasiDecreasingPrimitive";
  }
  return "?";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::NotMember: return "NotMember";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

json Certificate::to_json() const {
  json j = {{"class", class_name(cls)},
            {"p", p},
            {"verdict", verdict_name(verdict)},
            {"grid",
             {{"min", grid.min}, {"max", grid.max}, {"points", grid.points},
              {"refinement_rounds", grid.refinement_rounds}}},
            {"monotonicity_declared", monotonicity_declared}};
  if (verdict == Verdict::Member) {
    j["constant"] = constant;
    j["constant_label"] = "observed constant";
  } else {
    j["observed_sup"] = finite_or_string(constant);
  }
  json rs = json::array();
  for (double s : round_sups) rs.push_back(finite_or_string(s));
  j["round_sups"] = rs;
  if (witness) {
    json w = {{"r", witness->r}, {"ratio", finite_or_string(witness->ratio)}, {"reason", witness->reason}};
    if (witness->s) w["s"] = *witness->s;
    j["witness"] = w;
  }
  if (!note.empty()) j["note"] = note;
  return j;
}

namespace detail {

ScanResult scan_bp(const Weight& w, double p, const std::vector<double>& grid) {
  ScanResult out;
  out.grid = grid;
  std::vector<char> div(grid.size(), 0);
  out.ratio = kernels::parallel::map(grid, [&](double r) {
    const QuadResult tail = w.tail_moment(r, p);
    const double lhs = std::pow(r, p) * tail.value;
    const double ratio = kernels::detail::safe_ratio(lhs, w.W(r));
    return tail.diverged ? -std::abs(ratio) - 1.0 : ratio;
  });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (out.ratio[k] < 0.0) {
      // Negative encodes a divergent tail at this r.
      out.ratio[k] = kInf;
      if (!out.diverged) {
        out.diverged = true;
        out.diverged_at = grid[k];
      }
    }
  }
  const auto best = kernels::parallel::argmax(out.ratio);
  out.sup = best.value;
  out.r = grid[best.index];
  return out;
}

ScanResult scan_rp(const Weight& w, double p, const std::vector<double>& grid) {
  ScanResult out;
  out.grid = grid;
  const auto g = kernels::parallel::map(grid, [&](double t) { return w.W(t) / std::pow(t, p); });
  const auto best = kernels::parallel::suffix_ratio_sup(g);
  out.sup = best.value;
  out.r = grid[best.i];
  out.s = grid[best.j];
  // Per-r ratio: best s >= r.
  out.ratio.resize(grid.size());
  double smax = 0.0;
  for (std::size_t k = grid.size(); k-- > 0;) {
    smax = std::max(smax, g[k]);
    out.ratio[k] = kernels::detail::safe_ratio(smax, g[k]);
  }
  return out;
}

ScanResult scan_rwt(const Weight& w, double p, const std::vector<double>& grid, int lambda_per_decade) {
  // λ grid offset by half a step from powers of ten so that r/λ never lands
  // on the r grid; it spans as many decades below 1 as the r grid covers, so
  // s = r/λ reaches the same horizon as the R_p scan.
  std::vector<double> lambdas;
  const double decades = grid.size() > 1 ? std::log10(grid.back() / grid.front()) : 1.0;
  const int n = static_cast<int>(std::ceil(decades * lambda_per_decade));
  for (int j = 0; j < n; ++j) lambdas.push_back(std::pow(10.0, -(j + 0.5) / lambda_per_decade));
  ScanResult out;
  out.grid = grid;
  std::vector<double> best_s(grid.size(), 0.0);
  out.ratio = kernels::parallel::map(grid, [&](double r) {
    const double Wr = w.W(r);
    double best = 0.0;
    for (double lam : lambdas) {
      const double v = kernels::detail::safe_ratio(std::pow(lam, p) * hardy_char_levelset(r, lam, w), Wr);
      best = std::max(best, v);
    }
    return best;
  });
  const auto best = kernels::parallel::argmax(out.ratio);
  out.sup = best.value;
  out.r = grid[best.index];
  // Recover the maximizing s for the witness.
  const double Wr = w.W(out.r);
  double bv = -1.0;
  for (double lam : lambdas) {
    const double v = kernels::detail::safe_ratio(std::pow(lam, p) * hardy_char_levelset(out.r, lam, w), Wr);
    if (v > bv) {
      bv = v;
      out.s = out.r / lam;
    }
  }
  return out;
}

Certificate decide(ClassId cls, double p, const std::vector<ScanResult>& rounds, const RunConfig& cfg) {
  if (rounds.empty()) throw std::invalid_argument("decide: no scan rounds");
  for (const auto& r : rounds)
    if (r.grid.empty() || r.ratio.size() != r.grid.size())
      throw std::invalid_argument("decide: every round needs a nonempty grid with one ratio per point");
  Certificate c;
  c.cls = cls;
  c.p = p;
  c.grid = {rounds.back().grid.front(), rounds.back().grid.back(), 0,
            static_cast<int>(rounds.size()) - 1};
  for (const auto& r : rounds) {
    c.grid.points += r.grid.size();
    c.round_sups.push_back(r.sup);
    c.constant = std::max(c.constant, r.sup);
  }
  const auto witness_of = [](const ScanResult& r, const std::string& reason) {
    return Witness{r.r, r.s, r.sup, reason};
  };

  for (const auto& r : rounds) {
    if (r.diverged) {
      c.verdict = Verdict::NotMember;
      c.witness = Witness{r.diverged_at, std::nullopt, kInf, "divergent-tail"};
      c.note = "tail integral diverges";
      return c;
    }
  }
  for (const auto& r : rounds) {
    if (r.sup > cfg.blow_up_threshold) {
      c.verdict = Verdict::NotMember;
      c.witness = witness_of(r, "threshold");
      c.note = "ratio exceeds the blow-up threshold";
      return c;
    }
  }
  const double s1 = rounds.front().sup;
  bool stable = true;
  for (std::size_t k = 1; k < rounds.size(); ++k)
    if (rounds[k].sup > (1.0 + cfg.stability) * s1) stable = false;
  if (stable) {
    c.verdict = Verdict::Member;
    return c;
  }

  // Unstable: is the maximum on the extended horizon and still growing one
  // decade further out?
  const ScanResult& last = rounds.back();
  const auto it = std::max_element(last.ratio.begin(), last.ratio.end());
  const auto k = static_cast<std::size_t>(it - last.ratio.begin());
  const double r = last.grid[k];
  std::optional<double> inward;
  if (r < cfg.grid_min) inward = r * 10.0;
  if (r > cfg.grid_max) inward = r / 10.0;
  if (inward) {
    const auto jt = std::lower_bound(last.grid.begin(), last.grid.end(), *inward * (1.0 - 1e-9));
    if (jt != last.grid.end()) {
      const double inner = last.ratio[static_cast<std::size_t>(jt - last.grid.begin())];
      if (*it > (1.0 + cfg.stability) * inner) {
        c.verdict = Verdict::NotMember;
        c.witness = witness_of(last, "growth");
        c.note = "ratio keeps growing towards the horizon (" + std::to_string(*it) + " vs " +
                 std::to_string(inner) + " one decade inward)";
        return c;
      }
    }
  }
  c.verdict = Verdict::Inconclusive;
  c.witness = witness_of(last, "unstable");
  c.note = "observed constant not stable under refinement";
  return c;
}

}  // namespace detail

Certificate certify_bp(const Weight& w, double p, const RunConfig& cfg) {
  check_p(p);
  auto c = detail::decide(ClassId::Bp, p,
                          three_rounds(cfg, [&](const auto& g) { return detail::scan_bp(w, p, g); }), cfg);
  c.monotonicity_declared = w.declared_decreasing().has_value();
  return c;
}

Certificate certify_rp(const Weight& w, double p, const RunConfig& cfg) {
  check_p(p);
  auto c = detail::decide(ClassId::Rp, p,
                          three_rounds(cfg, [&](const auto& g) { return detail::scan_rp(w, p, g); }), cfg);
  c.monotonicity_declared = w.declared_decreasing().has_value();
  return c;
}

Certificate check_restricted_weak_type(const Weight& w, double p, const RunConfig& cfg) {
  check_p(p);
  const int lam = std::min(cfg.per_decade, 64);
  auto c = detail::decide(ClassId::RestrictedWeakType, p,
                          three_rounds(cfg, [&](const auto& g) { return detail::scan_rwt(w, p, g, lam); }), cfg);
  c.monotonicity_declared = w.declared_decreasing().has_value();
  return c;
}

Certificate check_quasi_decreasing_primitive(const Weight& w, const RunConfig& cfg) {
  Certificate c = certify_rp(w, 1.0, cfg);
  c.cls = ClassId::QuasiDecreasingPrimitive;
  return c;
}

json MeanValueReport::to_json() const {
  return {{"max_increase", max_increase}, {"at", at},       {"grid_start", grid_start},
          {"points", points},             {"passed", passed}};
}

MeanValueReport check_mean_value_decreasing(const DecreasingProfile& g, const Weight& mu, const RunConfig& cfg,
                                            double tolerance) {
  cfg.validate();
  std::vector<double> grid = log_grid(cfg.grid_min, cfg.grid_max, cfg.per_decade);
  std::vector<double> bps = g.breakpoints();
  const auto mb = mu.breakpoints();
  bps.insert(bps.end(), mb.begin(), mb.end());
  for (double b : bps) {
    if (b > cfg.grid_min && b < cfg.grid_max) {
      grid.push_back(b);
      grid.push_back(b * (1.0 - 1e-9));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // ∫ g dμ accumulated panel by panel along the grid, split at the
  // breakpoints of both g and μ, so saturated tails do not lose precision.
  std::sort(bps.begin(), bps.end());
  const auto* step = g.as_step();
  const auto panel = [&](double a, double b) {
    if (step) {
      double acc = 0.0;
      double left = 0.0;
      for (std::size_t i = 0; i < step->size() && left < b; ++i) {
        const double right = std::min(b, step->breakpoints()[i]);
        if (right > a) acc += step->values()[i] * (mu.W(right) - mu.W(std::max(a, left)));
        left = right;
      }
      return acc;
    }
    return integrate([&](double s) { return g(s) * mu(s); }, a, b, bps).value;
  };
  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), grid.begin(), grid.end());
  const auto pieces = kernels::parallel::panels<double>(cuts, panel);
  const auto masses = kernels::parallel::map(grid, [&](double t) { return mu.W(t); });
  std::vector<double> mean(grid.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    acc += pieces[k];
    mean[k] = masses[k] > 0.0 ? acc / masses[k] : -1.0;
  }

  MeanValueReport rep;
  rep.points = grid.size();
  bool started = false;
  double prev = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (mean[k] < 0.0) continue;
    if (!started) {
      started = true;
      rep.grid_start = grid[k];
      prev = mean[k];
      continue;
    }
    if (prev > 0.0) {
      const double inc = (mean[k] - prev) / prev;
      if (inc > rep.max_increase) {
        rep.max_increase = inc;
        rep.at = grid[k];
      }
    }
    prev = mean[k];
  }
  rep.passed = started && rep.max_increase <= tolerance;
  return rep;
}

}  // namespace lorentz
