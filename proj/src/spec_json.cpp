#include "lorentz/spec_json.hpp"

#include "lorentz/embeddings.hpp"

#include <cmath>
#include <initializer_list>
#include <iomanip>
#include <set>
#include <sstream>

namespace lorentz {

using nlohmann::json;

SpecError::SpecError(std::string pointer, const std::string& message)
    : std::invalid_argument((pointer.empty() ? std::string("/") : pointer) + ": " + message),
      pointer_(std::move(pointer)) {}

double spec_number(const json& v, const std::string& ptr) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Infinity" || s == "+inf") return kInf;
  }
  throw SpecError(ptr, "expected a number");
}

namespace {

std::string at(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string at(const std::string& base, std::size_t k) { return base + "/" + std::to_string(k); }

void require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SpecError(ptr, "expected a JSON object");
}

void allow_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  std::set<std::string> ok{"kind", "decreasing"};
  for (const char* k : keys) ok.insert(k);
  for (const auto& item : j.items())
    if (!ok.count(item.key())) throw SpecError(at(ptr, item.key()), "unknown field");
}

double num(const json& j, const std::string& ptr, const char* key, std::optional<double> dflt = std::nullopt) {
  if (!j.contains(key)) {
    if (dflt) return *dflt;
    throw SpecError(at(ptr, key), "missing required field");
  }
  return spec_number(j.at(key), at(ptr, key));
}

std::vector<double> num_array(const json& j, const std::string& ptr, const char* key) {
  if (!j.contains(key)) throw SpecError(at(ptr, key), "missing required field");
  const json& a = j.at(key);
  if (!a.is_array()) throw SpecError(at(ptr, key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(spec_number(a[k], at(at(ptr, key), k)));
  return out;
}

const json& array_field(const json& j, const std::string& ptr, const char* key) {
  if (!j.contains(key)) throw SpecError(at(ptr, key), "missing required field");
  const json& a = j.at(key);
  if (!a.is_array()) throw SpecError(at(ptr, key), "expected an array");
  return a;
}

std::string kind_of(const json& j, const std::string& ptr) {
  require_object(j, ptr);
  if (!j.contains("kind")) throw SpecError(at(ptr, "kind"), "missing required field");
  if (!j.at("kind").is_string()) throw SpecError(at(ptr, "kind"), "expected a string");
  return j.at("kind").get<std::string>();
}

// Runs a constructor, relabelling its argument errors with the spec pointer.
template <class F>
auto build(const std::string& ptr, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(ptr, e.what());
  }
}


}  // namespace

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("", what + " is not valid JSON: " + e.what());
  }
}

DecreasingProfile parse_profile(const json& j, const std::string& ptr) {
  const std::string kind = kind_of(j, ptr);
  if (kind == "step") {
    allow_keys(j, ptr, {"breakpoints", "values"});
    const auto b = num_array(j, ptr, "breakpoints");
    const auto v = num_array(j, ptr, "values");
    return build(ptr, [&] {
      StepFunction f(b, v);
      return f.is_nonincreasing() ? DecreasingProfile::step(f) : rearrange(f);
    });
  }
  if (kind == "decay") {
    allow_keys(j, ptr, {"c", "a", "b", "t0", "t1"});
    DecayParams d{num(j, ptr, "c"), num(j, ptr, "a"), num(j, ptr, "b", 0.0), num(j, ptr, "t0", 0.0),
                  num(j, ptr, "t1", kInf)};
    return build(ptr, [&] { return DecreasingProfile::decay(d); });
  }
  if (kind == "sum") {
    allow_keys(j, ptr, {"terms"});
    const json& a = array_field(j, ptr, "terms");
    std::vector<DecreasingProfile> terms;
    for (std::size_t k = 0; k < a.size(); ++k) terms.push_back(parse_profile(a[k], at(at(ptr, "terms"), k)));
    return DecreasingProfile::sum(std::move(terms));
  }
  if (kind == "scaled") {
    allow_keys(j, ptr, {"k", "inner"});
    if (!j.contains("inner")) throw SpecError(at(ptr, "inner"), "missing required field");
    const double k = num(j, ptr, "k");
    auto inner = parse_profile(j.at("inner"), at(ptr, "inner"));
    return build(ptr, [&] { return DecreasingProfile::scaled(k, inner); });
  }
  throw SpecError(at(ptr, "kind"), "unknown function kind '" + kind + "' (expected step, decay, sum or scaled)");
}

json profile_to_json(const DecreasingProfile& f) {
  switch (f.kind()) {
    case DecreasingProfile::Kind::Step: {
      const auto* s = f.as_step();
      return {{"kind", "step"},
              {"breakpoints", std::vector<double>(s->breakpoints().begin(), s->breakpoints().end())},
              {"values", std::vector<double>(s->values().begin(), s->values().end())}};
    }
    case DecreasingProfile::Kind::Decay: {
      const auto* d = f.as_decay();
      json j = {{"kind", "decay"}, {"c", d->c}, {"a", d->a}, {"b", d->b}, {"t0", d->t0}};
      if (std::isfinite(d->t1)) j["t1"] = d->t1;
      return j;
    }
    case DecreasingProfile::Kind::Sum: {
      json terms = json::array();
      for (const auto& t : f.terms()) terms.push_back(profile_to_json(t));
      return {{"kind", "sum"}, {"terms", terms}};
    }
    case DecreasingProfile::Kind::Scaled:
      return {{"kind", "scaled"}, {"k", f.scale()}, {"inner", profile_to_json(*f.inner())}};
  }
  return nullptr;
}

Weight parse_weight(const json& j, const std::string& ptr) {
  const std::string kind = kind_of(j, ptr);
  std::optional<bool> declared;
  if (j.contains("decreasing")) {
    if (!j.at("decreasing").is_boolean()) throw SpecError(at(ptr, "decreasing"), "expected a boolean");
    declared = j.at("decreasing").get<bool>();
  }
  const auto finish = [&](Weight w) { return declared ? w.declare_decreasing(*declared) : w; };

  const auto inner_of = [&](const char* key) {
    if (!j.contains(key)) throw SpecError(at(ptr, key), "missing required field");
    return parse_weight(j.at(key), at(ptr, key));
  };
  const auto terms_of = [&] {
    const json& a = array_field(j, ptr, "terms");
    std::vector<Weight> terms;
    for (std::size_t k = 0; k < a.size(); ++k) terms.push_back(parse_weight(a[k], at(at(ptr, "terms"), k)));
    return terms;
  };

  if (kind == "power") {
    allow_keys(j, ptr, {"gamma", "a", "b", "c"});
    const double g = num(j, ptr, "gamma"), a = num(j, ptr, "a", 0.0), b = num(j, ptr, "b", kInf),
                 c = num(j, ptr, "c", 1.0);
    return finish(build(ptr, [&] { return Weight::power(g, a, b, c); }));
  }
  if (kind == "logpoly") {
    allow_keys(j, ptr, {"coeffs", "gamma", "a", "b"});
    const auto co = num_array(j, ptr, "coeffs");
    const double g = num(j, ptr, "gamma", 0.0), a = num(j, ptr, "a", 0.0), b = num(j, ptr, "b", kInf);
    return finish(build(ptr, [&] { return Weight::log_poly(co, g, a, b); }));
  }
  if (kind == "char") {
    allow_keys(j, ptr, {"a", "b"});
    const double a = num(j, ptr, "a"), b = num(j, ptr, "b");
    return finish(build(ptr, [&] { return Weight::characteristic(a, b); }));
  }
  if (kind == "const") {
    allow_keys(j, ptr, {"c"});
    const double c = num(j, ptr, "c");
    return finish(build(ptr, [&] { return Weight::constant(c); }));
  }
  if (kind == "exp") {
    allow_keys(j, ptr, {"c", "rate"});
    const double c = num(j, ptr, "c", 1.0), rate = num(j, ptr, "rate", 1.0);
    return finish(build(ptr, [&] { return Weight::exponential(c, rate); }));
  }
  if (kind == "shifted_power") {
    allow_keys(j, ptr, {"c", "shift", "gamma"});
    const double c = num(j, ptr, "c", 1.0), s = num(j, ptr, "shift", 1.0), g = num(j, ptr, "gamma");
    return finish(build(ptr, [&] { return Weight::shifted_power(c, s, g); }));
  }
  if (kind == "step") {
    allow_keys(j, ptr, {"breakpoints", "values"});
    const auto b = num_array(j, ptr, "breakpoints");
    const auto v = num_array(j, ptr, "values");
    return finish(build(ptr, [&] { return Weight::step(StepFunction(b, v)); }));
  }
  if (kind == "tabulated") {
    allow_keys(j, ptr, {"grid", "values", "tail_exponent"});
    const auto g = num_array(j, ptr, "grid");
    const auto v = num_array(j, ptr, "values");
    std::optional<double> tail;
    if (j.contains("tail_exponent")) tail = num(j, ptr, "tail_exponent");
    return finish(build(ptr, [&] { return Weight::tabulated(g, v, tail); }));
  }
  if (kind == "sum" || kind == "product") {
    allow_keys(j, ptr, {"terms"});
    auto terms = terms_of();
    return finish(build(ptr, [&] { return kind == "sum" ? Weight::sum(terms) : Weight::product(terms); }));
  }
  if (kind == "smoothed") {
    allow_keys(j, ptr, {"inner", "depth"});
    auto inner = inner_of("inner");
    const double d = num(j, ptr, "depth", 1.0);
    if (d != std::floor(d) || d < 1 || d > 4) throw SpecError(at(ptr, "depth"), "depth must be 1, 2, 3 or 4");
    return finish(build(ptr, [&] { return Weight::smoothed(inner, static_cast<int>(d)); }));
  }
  if (kind == "dilated") {
    allow_keys(j, ptr, {"inner", "c"});
    auto inner = inner_of("inner");
    const double c = num(j, ptr, "c");
    return finish(build(ptr, [&] { return Weight::dilated(inner, c); }));
  }
  if (kind == "offset") {
    allow_keys(j, ptr, {"inner", "delta"});
    auto inner = inner_of("inner");
    const double d = num(j, ptr, "delta");
    return finish(build(ptr, [&] { return Weight::offset(inner, d); }));
  }
  if (kind == "wq") {
    allow_keys(j, ptr, {"base", "q"});
    auto base = inner_of("base");
    const double q = num(j, ptr, "q");
    return finish(build(ptr, [&] { return Weight::wq(base, q); }));
  }
  throw SpecError(at(ptr, "kind"), "unknown weight kind '" + kind + "'");
}


namespace {

std::string str_field(const json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) throw SpecError(ptr, "expected a JSON object");
  if (!j.contains(key)) throw SpecError(ptr + "/" + key, "missing required field");
  if (!j.at(key).is_string()) throw SpecError(ptr + "/" + key, "expected a string");
  return j.at(key).get<std::string>();
}

std::string short_number(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

}  // namespace

NormSpec parse_norm_spec(const json& j, const Weight& w, const std::string& ptr) {
  Space space;
  try {
    space = parse_space(str_field(j, ptr, "space"));
  } catch (const SpecError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(at(ptr, "space"), e.what());
  }
  NormParams np{num(j, ptr, "p"), num(j, ptr, "q", kInf), num(j, ptr, "alpha", 0.0)};
  try {
    np.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(ptr, e.what());
  }
  return NormSpec{space, np, w};
}

WitnessFamily parse_witness_family(const json& j, const std::string& ptr) {
  const std::string kind = str_field(j, ptr, "kind");
  const int max_power = static_cast<int>(num(j, ptr, "max_power", 20.0));
  WitnessFamily fam;
  fam.params = geometric_params(max_power);
  if (kind == "banachaq") {
    // 1 on (0, a/s], (a/s)/x on (a/s, a): support fixed at a, cap shrinking.
    const double a = num(j, ptr, "anchor");
    fam.name = "banachaq(anchor=" + short_number(a) + ")";
    fam.make = [a](double s) { return witness_banachaq(a / s, s); };
  } else if (kind == "reciprocal") {
    // min(s, 1/x) on (0, a).
    const double a = num(j, ptr, "end");
    fam.name = "reciprocal(end=" + short_number(a) + ")";
    fam.make = [a](double s) { return DecreasingProfile::decay({1.0, 1.0, 0.0, 1.0 / s, a}); };
  } else {
    throw SpecError(at(ptr, "kind"), "unknown witness family '" + kind + "'");
  }
  return fam;
}

}  // namespace lorentz
