#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz/config.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/profile.hpp"
#include "lorentz/weight.hpp"

namespace lorentz {

enum class EmbeddingStatus { Holds, Fails, Evidence };
std::string status_name(EmbeddingStatus s);

/// Result of a witness-family ratio study.
struct FamilyEvidence {
  std::string family;
  std::vector<double> params;
  std::vector<double> ratios;  // target / source, +inf when the target diverges
  double sup = 0.0;
  double growth_exponent = 0.0;
  double r2 = 0.0;
  std::string regressor;  // "log s" or "log(1 + log s)"
  std::string label;      // "strictness demonstrated", "boundedness evidence", "not demonstrated"

  nlohmann::json to_json() const;
};

struct EmbeddingVerdict {
  std::string relation;  // "sandwich", "eqwv", "ratio"
  EmbeddingStatus status = EmbeddingStatus::Fails;
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> witness_r;
  double witness_ratio = 0.0;
  std::string reason;
  std::vector<std::pair<double, double>> rounds;  // (c1, c2) per grid round
  std::optional<FamilyEvidence> evidence;

  nlohmann::json to_json() const;
};

/// Two-sided constants of [V(r) + r^q ∫_r^∞ v(x)x^{-q} dx] / W(r)^q.
EmbeddingVerdict check_sandwich(const Weight& w, const Weight& v, double q, const RunConfig& cfg = {});

/// Two-sided constants of [W(r)/r] / S(S*v)(r).
EmbeddingVerdict check_eqwv(const Weight& w, const Weight& v, const RunConfig& cfg = {});

/// Like check_eqwv but a single scan over [lo, hi] at cfg.per_decade.
EmbeddingVerdict check_eqwv_range(const Weight& w, const Weight& v, double lo, double hi,
                                  const RunConfig& cfg = {});

struct WitnessFamily {
  std::string name;
  std::vector<double> params;
  std::function<DecreasingProfile(double)> make;
};

/// Geometric parameters s ∈ {2, 4, ..., 2^20}.
std::vector<double> geometric_params(int max_power = 20);

/// sup over the family of ‖f‖_target / ‖f‖_source. "strictness demonstrated"
/// needs a divergent target norm, or a positive fitted growth exponent with
/// R² >= 0.99 and a sup above `threshold` (default cfg.blow_up_threshold).
EmbeddingVerdict norm_ratio_evidence(const NormSpec& source, const NormSpec& target, const WitnessFamily& family,
                                     const RunConfig& cfg = {}, std::optional<double> threshold = std::nullopt);

/// f*(x) = 1 on (0, a], a/x on (a, s·a), 0 beyond.
DecreasingProfile witness_banachaq(double a, double s);

/// f*(t) = e^{-1} on (0, e], t^{-1}(log t)^{-1/α} beyond.
DecreasingProfile runobancg_witness(double alpha);

/// ∫_0^T f* for the witness above (w = 1), closed form.
double runobancg_lambda1_partial(double alpha, double T);

/// ∫_e^T (f*)^α (f**)^{1−α} dt for the witness above (w = 1), evaluated in
/// the variable u = log t.
double runobancg_gamma1_alpha_partial(double alpha, double T);

}  // namespace lorentz
