#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lorentz/embeddings.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/profile.hpp"
#include "lorentz/weight.hpp"

namespace lorentz {

/// Malformed function or weight spec; `pointer()` is the JSON pointer of the
/// offending field (e.g. "/terms/1/gamma").
class SpecError : public std::invalid_argument {
 public:
  SpecError(std::string pointer, const std::string& message);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// A JSON number, or one of the strings "inf", "+inf", "Infinity".
double spec_number(const nlohmann::json& v, const std::string& pointer);

/// Parses text as JSON, reporting syntax errors as SpecError with an empty
/// pointer.
nlohmann::json parse_json_text(const std::string& text, const std::string& what);

/// {"kind":"step"|"decay"|"sum"|"scaled", ...}. Step functions that are not
/// nonincreasing are rearranged.
DecreasingProfile parse_profile(const nlohmann::json& j, const std::string& pointer = "");
nlohmann::json profile_to_json(const DecreasingProfile& f);

/// {"kind":"power"|"logpoly"|"char"|"const"|"sum"|"product"|"smoothed"|
/// "exp"|"shifted_power"|"step"|"tabulated"|"dilated"|"offset"|"wq", ...},
/// with an optional "decreasing": bool declaration.
Weight parse_weight(const nlohmann::json& j, const std::string& pointer = "");

/// {"space": "lambda"|"lambda-weak"|"gamma"|"gamma-weak"|"gamma-alpha",
/// "p": .., "q": .. (default inf), "alpha": .. (default 0)} bound to `w`.
NormSpec parse_norm_spec(const nlohmann::json& j, const Weight& w, const std::string& pointer = "");

/// {"kind": "banachaq", "anchor": a} gives s ↦ witness_banachaq(a/s, s);
/// {"kind": "reciprocal", "end": a} gives s ↦ min(s, 1/x) on (0, a).
/// Optional "max_power" (default 20) sets s ∈ {2, ..., 2^max_power}.
WitnessFamily parse_witness_family(const nlohmann::json& j, const std::string& pointer = "");

}  // namespace lorentz
