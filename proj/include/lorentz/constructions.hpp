#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lorentz/config.hpp"
#include "lorentz/weight.hpp"

namespace lorentz {

struct EmbeddingVerdict;

/// Two-sided bounds c1 <= ratio(r) <= c2 over a log grid.
struct EquivalenceReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  int per_decade = 0;
  bool pass = false;
  std::string failure;
  std::optional<double> witness_r;
  std::vector<double> grid;
  std::vector<double> ratios;

  nlohmann::json to_json(bool with_samples = false) const;
};

struct WqResult {
  double q = 1.0;
  Weight source;
  Weight wq;
  int depth = 0;  // smoothing levels applied before differentiating
  std::size_t clamped = 0;
  std::size_t sampled = 0;
  EquivalenceReport verification{};
  std::vector<double> table_grid{};  // 64 points per decade over the config grid
  std::vector<double> table_values{};

  nlohmann::json to_json() const;
};

using ScanRange = std::pair<double, double>;

/// w_q(r) = −r^q d/dx(W^{q−1}w/x^{q−1})(r) for a decreasing w with w(∞) = 0.
/// C¹ inputs are differentiated in closed form; continuous inputs are
/// Φ-smoothed once and discontinuous ones twice first. Throws
/// std::domain_error when w is not decreasing or w(∞) > 0, and
/// std::runtime_error when more than 1% of the sampled values are negative
/// beyond 1e-8 of the local scale.
WqResult build_wq(const Weight& w, double q, const RunConfig& cfg = {});

/// Ratio [∫_0^r w_q + r^q ∫_r^∞ w_q(x)x^{-q} dx] / W(r)^q over the grid
/// (default range: cfg.grid_min..cfg.grid_max). Passes when the constants
/// are finite and positive and c2/c1 <= max_spread.
EquivalenceReport verify_ecuwq(const Weight& w, const Weight& wq, double q, const RunConfig& cfg = {},
                               std::optional<ScanRange> range = std::nullopt, double max_spread = kInf);

enum class Lambda1Case { I, II, III, Inconclusive };
std::string lambda1_case_name(Lambda1Case c);

/// Case split for an equivalent norm on Λ¹(w), w decreasing:
/// (i) w(∞) = 0: Λ¹(w) = Γ¹(v) with v = w_1;
/// (ii) w(∞) > 0, w bounded: Λ¹(w) = L¹;
/// (iii) w(∞) > 0, w unbounded: Λ¹(w) = Γ¹(v) ∩ L¹ with v built from w − w(∞).
struct Lambda1Result {
  Lambda1Case which = Lambda1Case::Inconclusive;
  double w_inf = 0.0;
  double w_zero = 0.0;
  std::optional<Weight> v;
  std::optional<Weight> u;  // w − w(∞) in case (iii)
  std::shared_ptr<const EmbeddingVerdict> eqwv;
  std::string note;

  nlohmann::json to_json() const;
};

Lambda1Result lambda1_equivalent_norm(const Weight& w, const RunConfig& cfg = {});

/// v(t) = t^{-2}(log(4t)χ_(1/4,1/2)(t) − log t·χ_(1/2,1)(t)).
Weight paper_v_char01();

}  // namespace lorentz
