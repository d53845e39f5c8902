#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz/config.hpp"

namespace lorentz::gallery {

/// A named, deterministic scenario loaded from the registry file.
struct Scenario {
  std::string id;
  std::string description;
  std::vector<std::string> tags;
  nlohmann::json inputs;    // weights, functions, parameters
  nlohmann::json expected;  // expected verdicts per check
  nlohmann::json config;    // RunConfig overrides
};

/// One comparison of an observed outcome against its expected value.
struct Check {
  std::string name;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct ScenarioReport {
  std::string id;
  std::string description;
  std::vector<std::string> tags;
  bool passed = false;
  std::vector<Check> checks;
  nlohmann::json details;  // intermediate certificates and verdicts
  nlohmann::json to_json() const;
};

class Registry {
 public:
  /// Parses a registry document; throws SpecError on malformed entries and
  /// std::invalid_argument on duplicate ids.
  static Registry from_json(const nlohmann::json& doc);
  static Registry load(const std::string& path);
  /// $LORENTZ_GALLERY_REGISTRY if set, else the registry shipped with the
  /// source tree.
  static Registry load_default();

  /// Sorted by id.
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  /// Throws std::out_of_range for an unknown id.
  const Scenario& find(const std::string& id) const;

 private:
  std::vector<Scenario> scenarios_;
};

/// Runs one scenario under `cfg` with the scenario's overrides applied.
ScenarioReport run(const Scenario& s, const RunConfig& cfg = {});

struct Summary {
  std::vector<ScenarioReport> rows;  // sorted by id
  std::size_t passed = 0;
  std::size_t failed = 0;
  bool all_passed() const { return failed == 0; }
  nlohmann::json to_json() const;
  /// Fixed-width text table, one row per scenario plus a totals row.
  std::string table() const;
};

/// Runs every scenario carrying `tag` (all of them when `tag` is empty).
Summary run_all(const Registry& reg, const RunConfig& cfg = {}, const std::string& tag = "");

/// Applies the keys of `overrides` (grid_min, grid_max, per_decade, ...) to a
/// copy of `base`; unknown keys raise SpecError.
RunConfig apply_overrides(const RunConfig& base, const nlohmann::json& overrides, const std::string& pointer);

/// The config as a JSON object with the same keys apply_overrides accepts.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace lorentz::gallery
