#include "lorentz/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lorentz/classes.hpp"
#include "lorentz/constructions.hpp"
#include "lorentz/embeddings.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/spec_json.hpp"

#ifndef LORENTZ_DEFAULT_REGISTRY
#define LORENTZ_DEFAULT_REGISTRY "data/gallery_registry.json"
#endif

namespace lorentz::gallery {

using nlohmann::json;

namespace {

std::string at(const std::string& base, const std::string& key) { return base + "/" + key; }

const json& field(const json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) throw SpecError(ptr, "expected a JSON object");
  if (!j.contains(key)) throw SpecError(at(ptr, key), "missing required field");
  return j.at(key);
}

std::string str(const json& j, const std::string& ptr, const char* key) {
  const json& v = field(j, ptr, key);
  if (!v.is_string()) throw SpecError(at(ptr, key), "expected a string");
  return v.get<std::string>();
}

double num(const json& j, const std::string& ptr, const char* key, std::optional<double> dflt = std::nullopt) {
  if (dflt && (!j.is_object() || !j.contains(key))) return *dflt;
  return spec_number(field(j, ptr, key), at(ptr, key));
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

json finite_or_string(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

struct Context {
  const RunConfig& cfg;
  std::map<std::string, Weight> weights;
  std::vector<Check> checks;
  json details = json::object();

  const Weight& weight(const json& step, const std::string& ptr, const char* key = "weight") const {
    const std::string name = str(step, ptr, key);
    const auto it = weights.find(name);
    if (it == weights.end()) throw SpecError(at(ptr, key), "no weight named '" + name + "'");
    return it->second;
  }

  void record(const std::string& name, const std::string& observed, const json& expected) {
    Check c;
    c.name = name;
    c.observed = observed;
    if (expected.is_string()) {
      c.expected = expected.get<std::string>();
      c.pass = c.expected == observed;
    } else {
      c.expected = "(none)";
      c.pass = false;
    }
    checks.push_back(std::move(c));
  }
};

// Expected value of a sub-check; null when absent.
json sub(const json& expected, const std::string& key) {
  return expected.is_object() && expected.contains(key) ? expected.at(key) : json();
}

ClassId parse_class(const std::string& s, const std::string& ptr) {
  if (s == "bp") return ClassId::Bp;
  if (s == "rp") return ClassId::Rp;
  if (s == "rwt") return ClassId::RestrictedWeakType;
  if (s == "qdp") return ClassId::QuasiDecreasingPrimitive;
  throw SpecError(ptr, "unknown class '" + s + "' (bp, rp, rwt, qdp)");
}

Certificate certify(ClassId c, const Weight& w, double p, const RunConfig& cfg) {
  switch (c) {
    case ClassId::Bp: return certify_bp(w, p, cfg);
    case ClassId::Rp: return certify_rp(w, p, cfg);
    case ClassId::RestrictedWeakType: return check_restricted_weak_type(w, p, cfg);
    case ClassId::QuasiDecreasingPrimitive: return check_quasi_decreasing_primitive(w, cfg);
  }
  throw std::logic_error("unreachable");
}

void op_certify(Context& cx, const std::string& name, const json& step, const std::string& ptr,
                const json& expected) {
  const ClassId c = parse_class(str(step, ptr, "class"), at(ptr, "class"));
  const Certificate cert = certify(c, cx.weight(step, ptr), num(step, ptr, "p", 1.0), cx.cfg);
  cx.details[name] = cert.to_json();
  cx.record(name, verdict_name(cert.verdict), expected);
}

void op_norm(Context& cx, const std::string& name, const json& step, const std::string& ptr,
             const json& expected) {
  const Weight& w = cx.weight(step, ptr);
  const DecreasingProfile f = parse_profile(field(step, ptr, "function"), at(ptr, "function"));
  const NormSpec spec = parse_norm_spec(field(step, ptr, "norm"), w, at(ptr, "norm"));
  const NormValue v = evaluate(spec, f, cx.cfg);
  cx.details[name] = {{"norm", spec.label()}, {"result", v.to_json()}};
  cx.record(name, v.diverged ? "diverged" : "finite", expected);
}

void op_evidence(Context& cx, const std::string& name, const json& step, const std::string& ptr,
                 const json& expected) {
  const Weight& w = cx.weight(step, ptr);
  const NormSpec src = parse_norm_spec(field(step, ptr, "source"), w, at(ptr, "source"));
  const NormSpec tgt = parse_norm_spec(field(step, ptr, "target"), w, at(ptr, "target"));
  const WitnessFamily fam = parse_witness_family(field(step, ptr, "family"), at(ptr, "family"));
  std::optional<double> thr;
  if (step.contains("threshold")) thr = num(step, ptr, "threshold");
  const EmbeddingVerdict v = norm_ratio_evidence(src, tgt, fam, cx.cfg, thr);
  json d = v.to_json();
  d["threshold"] = finite_or_string(thr.value_or(cx.cfg.blow_up_threshold));
  cx.details[name] = d;
  cx.record(name, v.evidence->label, expected);
}

void op_ordering(Context& cx, const std::string& name, const json& step, const std::string& ptr,
                 const json& expected) {
  const Weight& w = cx.weight(step, ptr);
  const NormSpec lower = parse_norm_spec(field(step, ptr, "lower"), w, at(ptr, "lower"));
  const NormSpec upper = parse_norm_spec(field(step, ptr, "upper"), w, at(ptr, "upper"));
  const WitnessFamily fam = parse_witness_family(field(step, ptr, "family"), at(ptr, "family"));
  std::size_t violations = 0;
  double worst = 0.0;
  for (double s : fam.params) {
    const DecreasingProfile f = fam.make(s);
    const NormValue a = evaluate(lower, f, cx.cfg);
    const NormValue b = evaluate(upper, f, cx.cfg);
    if (b.diverged) continue;
    const double excess = a.diverged ? kInf : (a.value - b.value) / std::max(b.value, 1e-300);
    worst = std::max(worst, excess);
    if (excess > 1e-9) ++violations;
  }
  cx.details[name] = {{"lower", lower.label()},
                      {"upper", upper.label()},
                      {"family", fam.name},
                      {"members", fam.params.size()},
                      {"violations", violations},
                      {"worst_relative_excess", finite_or_string(worst)}};
  cx.record(name, violations == 0 ? "holds" : "violated", expected);
}

void op_adjudicate(Context& cx, const std::string& name, const json& step, const std::string& ptr,
                   const json& expected) {
  // Runs the B_p certifier on t^{-α}χ_(0,1) for each α and reports which
  // exponents are members.
  const json& alphas = field(step, ptr, "exponents");
  if (!alphas.is_array() || alphas.empty()) throw SpecError(at(ptr, "exponents"), "expected a nonempty array");
  const double p = num(step, ptr, "p", 1.0);
  std::vector<std::string> members;
  json per = json::object();
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double a = spec_number(alphas[k], at(at(ptr, "exponents"), std::to_string(k)));
    const Weight w = Weight::power(-a, 0.0, 1.0);
    const Certificate cert = certify_bp(w, p, cx.cfg);
    json d = cert.to_json();
    d["weight"] = w.to_json();
    d["increasing_on_support"] = a < 0.0;
    per["alpha=" + fmt(a)] = d;
    if (cert.verdict == Verdict::Member) members.push_back("alpha=" + fmt(a));
  }
  std::string obs;
  for (const auto& m : members) obs += (obs.empty() ? "" : ",") + m;
  if (obs.empty()) obs = "none";
  cx.details[name] = {{"conventions", per}, {"members", members}, {"exactly_one", members.size() == 1}};
  cx.record(name, obs, expected);
}

void op_slow_divergence(Context& cx, const std::string& name, const json& step, const std::string& ptr,
                        const json& expected) {
  // Witness t^{-1}(log t)^{-1/α} against w = 1: the Λ¹ norm converges while
  // the Γ¹_α partial integrals grow like log log T.
  const double alpha = num(step, ptr, "alpha");
  const json& hs = field(step, ptr, "horizons");
  if (!hs.is_array() || hs.size() < 3) throw SpecError(at(ptr, "horizons"), "expected at least three horizons");
  std::vector<double> T, L, G, x;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    T.push_back(spec_number(hs[k], at(at(ptr, "horizons"), std::to_string(k))));
    L.push_back(runobancg_lambda1_partial(alpha, T.back()));
    G.push_back(runobancg_gamma1_alpha_partial(alpha, T.back()));
    x.push_back(std::log(std::log(T.back())));
  }
  const NormValue full = lambda_norm(runobancg_witness(alpha), Weight::constant(1.0), 1.0, cx.cfg);
  bool monotone = true;
  for (std::size_t k = 1; k < G.size(); ++k) monotone = monotone && G[k] > G[k - 1];
  // Affine least squares of G against log log T.
  const double n = static_cast<double>(G.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < G.size(); ++k) mx += x[k] / n, my += G[k] / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < G.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (G[k] - my);
    syy += (G[k] - my) * (G[k] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 0.0;
  json rows = json::array();
  for (std::size_t k = 0; k < T.size(); ++k)
    rows.push_back({{"T", T[k]}, {"lambda1_partial", L[k]}, {"gamma1_alpha_partial", G[k]}});
  cx.details[name] = {{"alpha", alpha},
                      {"lambda1_norm", full.to_json()},
                      {"partials", rows},
                      {"gamma_fit", {{"slope", slope}, {"intercept", my - slope * mx}, {"r2", r2},
                                     {"regressor", "log log T"}}},
                      {"gamma_monotone", monotone}};
  cx.record(name + ":lambda1", full.diverged ? "diverged" : "converged", sub(expected, "lambda1"));
  const bool unbounded = monotone && slope > 0.0 && r2 >= 0.99;
  cx.record(name + ":gamma1-alpha", unbounded ? "unbounded" : "not demonstrated",
            sub(expected, "gamma1-alpha"));
}

void op_eqwv(Context& cx, const std::string& name, const json& step, const std::string& ptr,
             const json& expected) {
  const Weight& w = cx.weight(step, ptr);
  const Weight& v = cx.weight(step, ptr, "v");
  const EmbeddingVerdict e = check_eqwv(w, v, cx.cfg);
  cx.details[name] = e.to_json();
  cx.record(name, status_name(e.status), sub(expected, "status"));
  if (step.contains("baseline")) {
    const json& b = step.at("baseline");
    const std::string bp = at(ptr, "baseline");
    const double c1 = num(b, bp, "c1");
    const double c2 = num(b, bp, "c2");
    const double rel = num(b, bp, "rel");
    const bool ok = std::abs(e.c1 - c1) <= rel * c1 && std::abs(e.c2 - c2) <= rel * c2;
    cx.details[name]["baseline"] = b;
    cx.record(name + ":baseline", ok ? "stable" : "drifted", sub(expected, "baseline"));
  }
}

void op_wq(Context& cx, const std::string& name, const json& step, const std::string& ptr,
           const json& expected) {
  const Weight& w = cx.weight(step, ptr);
  const json& qs = field(step, ptr, "q");
  if (!qs.is_array() || qs.empty()) throw SpecError(at(ptr, "q"), "expected a nonempty array");
  const double lo = num(step, ptr, "r_min");
  const double hi = num(step, ptr, "r_max");
  const double tol = num(step, ptr, "tolerance");
  json per = json::object();
  for (std::size_t k = 0; k < qs.size(); ++k) {
    const double q = spec_number(qs[k], at(at(ptr, "q"), std::to_string(k)));
    const WqResult res = build_wq(w, q, cx.cfg);
    const EquivalenceReport rep = verify_ecuwq(res.source, res.wq, q, cx.cfg, ScanRange{lo, hi});
    const bool exact = std::abs(rep.c1 - 1.0) <= tol && std::abs(rep.c2 - 1.0) <= tol;
    per["q=" + fmt(q)] = rep.to_json();
    cx.record(name + ":q=" + fmt(q), exact ? "exact" : "inexact", sub(expected, "q=" + fmt(q)));
  }
  cx.details[name] = per;
}

using Op = void (*)(Context&, const std::string&, const json&, const std::string&, const json&);

const std::map<std::string, Op>& ops() {
  static const std::map<std::string, Op> table = {
      {"certify", op_certify},   {"norm", op_norm},
      {"evidence", op_evidence}, {"ordering", op_ordering},
      {"adjudicate-bp", op_adjudicate}, {"slow-divergence", op_slow_divergence},
      {"eqwv", op_eqwv},         {"wq-exactness", op_wq},
  };
  return table;
}

Scenario parse_scenario(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SpecError(ptr, "expected a JSON object");
  static const std::set<std::string> keys{"id", "description", "tags", "inputs", "expected", "config", "notes"};
  for (const auto& item : j.items())
    if (!keys.count(item.key())) throw SpecError(at(ptr, item.key()), "unknown field");
  Scenario s;
  s.id = str(j, ptr, "id");
  s.description = str(j, ptr, "description");
  if (j.contains("tags")) {
    const json& t = j.at("tags");
    if (!t.is_array()) throw SpecError(at(ptr, "tags"), "expected an array of strings");
    for (const auto& x : t) {
      if (!x.is_string()) throw SpecError(at(ptr, "tags"), "expected an array of strings");
      s.tags.push_back(x.get<std::string>());
    }
  }
  s.inputs = field(j, ptr, "inputs");
  s.expected = field(j, ptr, "expected");
  s.config = j.value("config", json::object());
  // Validate eagerly so that a malformed registry fails at load time.
  const std::string ip = at(ptr, "inputs");
  const json& ws = field(s.inputs, ip, "weights");
  if (!ws.is_object()) throw SpecError(at(ip, "weights"), "expected an object of named weights");
  for (const auto& item : ws.items()) parse_weight(item.value(), at(at(ip, "weights"), item.key()));
  const json& steps = field(s.inputs, ip, "steps");
  if (!steps.is_array() || steps.empty()) throw SpecError(at(ip, "steps"), "expected a nonempty array");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string sp = at(at(ip, "steps"), std::to_string(k));
    const std::string op = str(steps[k], sp, "op");
    if (!ops().count(op)) throw SpecError(at(sp, "op"), "unknown operation '" + op + "'");
  }
  apply_overrides(RunConfig{}, s.config, at(ptr, "config"));
  return s;
}

}  // namespace

RunConfig apply_overrides(const RunConfig& base, const json& o, const std::string& ptr) {
  if (!o.is_object()) throw SpecError(ptr, "expected a JSON object");
  RunConfig c = base;
  for (const auto& item : o.items()) {
    const std::string& k = item.key();
    const std::string kp = at(ptr, k);
    const double x = spec_number(item.value(), kp);
    if (k == "grid_min") c.grid_min = x;
    else if (k == "grid_max") c.grid_max = x;
    else if (k == "per_decade") c.per_decade = static_cast<int>(x);
    else if (k == "ext_min") c.ext_min = x;
    else if (k == "ext_max") c.ext_max = x;
    else if (k == "refinement_rounds") c.refinement_rounds = static_cast<int>(x);
    else if (k == "rel_tol") c.rel_tol = x;
    else if (k == "abs_tol") c.abs_tol = x;
    else if (k == "norm_tol") c.norm_tol = x;
    else if (k == "horizon_doublings") c.horizon_doublings = static_cast<int>(x);
    else if (k == "blow_up_threshold") c.blow_up_threshold = x;
    else if (k == "stability") c.stability = x;
    else if (k == "sup_per_decade") c.sup_per_decade = static_cast<int>(x);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(x);
    else throw SpecError(kp, "unknown config field");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(ptr, e.what());
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  return {{"grid_min", c.grid_min},
          {"grid_max", c.grid_max},
          {"per_decade", c.per_decade},
          {"ext_min", c.ext_min},
          {"ext_max", c.ext_max},
          {"refinement_rounds", c.refinement_rounds},
          {"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"norm_tol", c.norm_tol},
          {"horizon_doublings", c.horizon_doublings},
          {"blow_up_threshold", finite_or_string(c.blow_up_threshold)},
          {"stability", c.stability},
          {"sup_per_decade", c.sup_per_decade},
          {"seed", c.seed}};
}

Registry Registry::from_json(const json& doc) {
  const json& list = field(doc, "", "scenarios");
  if (!list.is_array()) throw SpecError("/scenarios", "expected an array");
  Registry reg;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < list.size(); ++k) {
    Scenario s = parse_scenario(list[k], "/scenarios/" + std::to_string(k));
    if (!seen.insert(s.id).second) throw std::invalid_argument("gallery: duplicate scenario id '" + s.id + "'");
    reg.scenarios_.push_back(std::move(s));
  }
  std::sort(reg.scenarios_.begin(), reg.scenarios_.end(),
            [](const Scenario& a, const Scenario& b) { return a.id < b.id; });
  return reg;
}

Registry Registry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("gallery: cannot open registry '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(parse_json_text(ss.str(), "registry"));
}

Registry Registry::load_default() {
  if (const char* env = std::getenv("LORENTZ_GALLERY_REGISTRY"); env && *env) return load(env);
  return load(LORENTZ_DEFAULT_REGISTRY);
}

const Scenario& Registry::find(const std::string& id) const {
  for (const auto& s : scenarios_)
    if (s.id == id) return s;
  throw std::out_of_range("gallery: unknown scenario '" + id + "'");
}

ScenarioReport run(const Scenario& s, const RunConfig& base) {
  const RunConfig cfg = apply_overrides(base, s.config, "/config");
  Context cx{cfg, {}, {}, json::object()};
  for (const auto& item : s.inputs.at("weights").items())
    cx.weights.emplace(item.key(), parse_weight(item.value(), "/inputs/weights/" + item.key()));
  const json& steps = s.inputs.at("steps");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string ptr = "/inputs/steps/" + std::to_string(k);
    const json& step = steps[k];
    const std::string op = str(step, ptr, "op");
    const std::string name = step.value("name", op);
    ops().at(op)(cx, name, step, ptr, sub(s.expected, name));
  }
  ScenarioReport r;
  r.id = s.id;
  r.description = s.description;
  r.tags = s.tags;
  r.checks = std::move(cx.checks);
  r.details = std::move(cx.details);
  // Every expected key must have been produced by some step.
  for (const auto& item : s.expected.items()) {
    const bool produced = std::any_of(r.checks.begin(), r.checks.end(), [&](const Check& c) {
      return c.name == item.key() || c.name.rfind(item.key() + ":", 0) == 0;
    });
    if (!produced) r.checks.push_back({item.key(), item.value().dump(), "(not produced)", false});
  }
  r.passed = !r.checks.empty() &&
             std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
  return r;
}

json ScenarioReport::to_json() const {
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"pass", c.pass}});
  return {{"id", id},           {"description", description}, {"tags", tags},
          {"passed", passed},   {"checks", cs},               {"details", details}};
}

json Summary::to_json() const {
  json rs = json::array();
  for (const auto& r : rows) rs.push_back(r.to_json());
  return {{"scenarios", rs}, {"total", rows.size()}, {"passed", passed}, {"failed", failed}};
}

std::string Summary::table() const {
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.id.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "scenario" << "  result  checks\n";
  for (const auto& r : rows) {
    std::size_t ok = 0;
    for (const auto& c : r.checks) ok += c.pass ? 1 : 0;
    os << std::left << std::setw(static_cast<int>(w)) << r.id << "  " << (r.passed ? "pass" : "FAIL") << "    "
       << ok << "/" << r.checks.size() << "\n";
    for (const auto& c : r.checks)
      if (!c.pass) os << "    " << c.name << ": expected " << c.expected << ", observed " << c.observed << "\n";
  }
  os << "total " << rows.size() << ", passed " << passed << ", failed " << failed << "\n";
  return os.str();
}

Summary run_all(const Registry& reg, const RunConfig& cfg, const std::string& tag) {
  Summary sum;
  for (const auto& s : reg.scenarios()) {
    if (!tag.empty() && std::find(s.tags.begin(), s.tags.end(), tag) == s.tags.end()) continue;
    sum.rows.push_back(run(s, cfg));
    (sum.rows.back().passed ? sum.passed : sum.failed) += 1;
  }
  return sum;
}

}  // namespace lorentz::gallery
