#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz/config.hpp"
#include "lorentz/profile.hpp"
#include "lorentz/weight.hpp"

namespace lorentz {

enum class ClassId { Bp, Rp, RestrictedWeakType, QuasiDecreasingPrimitive };
enum class Verdict { Member, NotMember, Inconclusive };

std::string class_name(ClassId c);
std::string verdict_name(Verdict v);

/// Where the certifier found its extreme ratio: r (and s for pair conditions).
struct Witness {
  double r = 0.0;
  std::optional<double> s;
  double ratio = 0.0;
  std::string reason;  // "threshold", "divergent-tail", "growth"
};

struct GridInfo {
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;
  int refinement_rounds = 0;
};

/// Evidence for weight-class membership. `constant` is the observed
/// supremum over every scanned grid (a lower bound for the true constant).
struct Certificate {
  ClassId cls = ClassId::Bp;
  double p = 1.0;
  Verdict verdict = Verdict::Inconclusive;
  double constant = 0.0;
  std::optional<Witness> witness;
  GridInfo grid;
  bool monotonicity_declared = false;
  std::vector<double> round_sups;  // base, doubled density, extended horizon
  std::string note;

  nlohmann::json to_json() const;
};

/// Eq. B_p: r^p ∫_r^∞ w(s)s^{-p} ds <= C·W(r).
Certificate certify_bp(const Weight& w, double p, const RunConfig& cfg = {});
/// R_p: W(s)/s^p <= C·W(r)/r^p for 0 < r <= s.
Certificate certify_rp(const Weight& w, double p, const RunConfig& cfg = {});
/// λ^p·W(r/λ) <= C·W(r) for λ in (0, 1).
Certificate check_restricted_weak_type(const Weight& w, double p, const RunConfig& cfg = {});
/// W(t)/t <= C·W(s)/s for 0 < s <= t (certify_rp at p = 1).
Certificate check_quasi_decreasing_primitive(const Weight& w, const RunConfig& cfg = {});

struct MeanValueReport {
  double max_increase = 0.0;  // largest relative increase between grid neighbours
  double at = 0.0;            // abscissa where it occurred
  double grid_start = 0.0;    // first abscissa with μ(0, t) > 0
  std::size_t points = 0;
  bool passed = false;

  nlohmann::json to_json() const;
};

/// Checks that t ↦ (1/μ(0,t))∫_0^t g dμ is nonincreasing on the grid, with
/// μ given by its density.
MeanValueReport check_mean_value_decreasing(const DecreasingProfile& g, const Weight& mu_density,
                                            const RunConfig& cfg = {}, double tolerance = 1e-12);

namespace detail {

/// One grid scan of a class ratio.
struct ScanResult {
  double sup = 0.0;
  double r = 0.0;
  std::optional<double> s;
  bool diverged = false;
  double diverged_at = 0.0;
  std::vector<double> grid;
  std::vector<double> ratio;  // per-r ratio (pair conditions: best over s)
};

/// Turns three scans (base grid, doubled density, extended horizon) into a
/// verdict under the rules documented in the README.
Certificate decide(ClassId cls, double p, const std::vector<ScanResult>& rounds, const RunConfig& cfg);

ScanResult scan_bp(const Weight& w, double p, const std::vector<double>& grid);
ScanResult scan_rp(const Weight& w, double p, const std::vector<double>& grid);
ScanResult scan_rwt(const Weight& w, double p, const std::vector<double>& grid, int lambda_per_decade);

}  // namespace detail

}  // namespace lorentz
