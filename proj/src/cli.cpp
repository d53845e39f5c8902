#include "lorentz/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lorentz/classes.hpp"
#include "lorentz/config.hpp"
#include "lorentz/constructions.hpp"
#include "lorentz/embeddings.hpp"
#include "lorentz/gallery.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/spec_json.hpp"

namespace lorentz {

using nlohmann::json;

namespace {

// Thrown for argument combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string space = "lambda";
  double p = 1.0;
  std::optional<double> q;
  double alpha = 0.0;
  std::string weight;
  std::string function;
  std::string v;
  std::string cls = "bp";
  std::string relation = "eqwv";
  std::string source;
  std::string target;
  std::string family;
  std::string tag;
  std::vector<std::string> ids;
  std::optional<double> grid_min, grid_max, tol, threshold;
  std::optional<int> per_decade;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
};

RunConfig make_config(const Options& o) {
  RunConfig c;
  if (o.grid_min) c.grid_min = *o.grid_min;
  if (o.grid_max) c.grid_max = *o.grid_max;
  if (o.per_decade) c.per_decade = *o.per_decade;
  if (o.tol) c.rel_tol = *o.tol;
  if (o.threshold) c.blow_up_threshold = *o.threshold;
  if (o.seed) c.seed = *o.seed;
  // Keep the extended horizon at least as wide as the base grid.
  c.ext_min = std::min(c.ext_min, c.grid_min);
  c.ext_max = std::max(c.ext_max, c.grid_max);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

json require_json(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string("missing required option ") + flag);
  return parse_json_text(text, flag);
}

// Prefixes the pointer of a spec error with the flag it came from.
[[noreturn]] void rethrow_under(const SpecError& e, const char* flag) {
  const std::string prefix = (e.pointer().empty() ? std::string("/") : e.pointer()) + ": ";
  std::string msg = e.what();
  if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
  throw SpecError(std::string(flag) + e.pointer(), msg);
}

Weight weight_arg(const std::string& text, const char* flag) {
  try {
    return parse_weight(require_json(text, flag));
  } catch (const SpecError& e) {
    rethrow_under(e, flag);
  }
}

DecreasingProfile profile_arg(const std::string& text, const char* flag) {
  try {
    return parse_profile(require_json(text, flag));
  } catch (const SpecError& e) {
    rethrow_under(e, flag);
  }
}

json envelope(const std::string& command, const RunConfig& cfg, json result) {
  return {{"schema", kSchema},
          {"version", kVersion},
          {"command", command},
          {"config", gallery::config_to_json(cfg)},
          {"result", std::move(result)}};
}

std::string csv(const std::vector<double>& t, const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,value\n";
  for (std::size_t k = 0; k < t.size(); ++k) os << t[k] << "," << v[k] << "\n";
  return os.str();
}

struct Emitted {
  std::string text;
  int status = 0;
};

Emitted emit(const Options& o, const std::string& command, const RunConfig& cfg, const json& result, int status,
             const std::function<std::string()>& csv_body = {}, const std::function<std::string()>& text_body = {}) {
  Emitted e;
  e.status = status;
  if (o.format == "json") {
    e.text = envelope(command, cfg, result).dump(2) + "\n";
  } else if (o.format == "csv") {
    if (!csv_body) throw UsageError("--format csv is only available for tabulated output (construct-wq, check --relation ratio)");
    e.text = csv_body();
  } else {
    e.text = text_body ? text_body() : envelope(command, cfg, result).dump(2) + "\n";
  }
  return e;
}

Emitted cmd_norm(const Options& o, const RunConfig& cfg) {
  const Weight w = weight_arg(o.weight, "--weight");
  const DecreasingProfile f = profile_arg(o.function, "--function");
  Space space;
  try {
    space = parse_space(o.space);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  NormParams np{o.p, o.q.value_or(kInf), o.alpha};
  if (space == Space::Gamma && !o.q) throw UsageError("--space gamma needs --q (use gamma-weak for q = inf)");
  try {
    np.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const NormSpec spec{space, np, w};
  const NormValue v = evaluate(spec, f, cfg);
  json r = v.to_json();
  r["norm"] = spec.to_json();
  return emit(o, "norm", cfg, r, 0, {}, [&] {
    std::ostringstream os;
    os << std::setprecision(17) << spec.label() << " = " << v.value << (v.diverged ? " (diverged)" : "") << "\n";
    return os.str();
  });
}

Emitted cmd_certify(const Options& o, const RunConfig& cfg) {
  const Weight w = weight_arg(o.weight, "--weight");
  Certificate c;
  if (o.cls == "bp") c = certify_bp(w, o.p, cfg);
  else if (o.cls == "rp") c = certify_rp(w, o.p, cfg);
  else if (o.cls == "rwt") c = check_restricted_weak_type(w, o.p, cfg);
  else if (o.cls == "qdp") c = check_quasi_decreasing_primitive(w, cfg);
  else throw UsageError("--class must be one of bp, rp, rwt, qdp");
  json r = c.to_json();
  r["weight"] = w.to_json();
  const int status = c.verdict == Verdict::Member ? 0 : 1;
  return emit(o, "certify", cfg, r, status, {}, [&] {
    std::ostringstream os;
    os << class_name(c.cls) << "(p=" << c.p << "): " << verdict_name(c.verdict);
    if (c.verdict == Verdict::Member) os << ", observed constant " << std::setprecision(10) << c.constant;
    if (c.witness) os << ", witness r=" << c.witness->r << " ratio=" << c.witness->ratio << " (" << c.witness->reason << ")";
    os << "\n";
    return os.str();
  });
}

Emitted cmd_construct(const Options& o, const RunConfig& cfg) {
  const Weight w = weight_arg(o.weight, "--weight");
  const double q = o.q.value_or(1.0);
  const WqResult res = build_wq(w, q, cfg);
  json r = {{"w_q", res.wq.to_json()},
            {"verification", res.verification.to_json()},
            {"q", q},
            {"smoothing_depth", res.depth},
            {"clamped", res.clamped},
            {"sampled", res.sampled}};
  return emit(o, "construct-wq", cfg, r, res.verification.pass ? 0 : 1,
              [&] { return csv(res.table_grid, res.table_values); });
}

Emitted cmd_equiv(const Options& o, const RunConfig& cfg) {
  const Weight w = weight_arg(o.weight, "--weight");
  const Lambda1Result res = lambda1_equivalent_norm(w, cfg);
  bool ok = res.which != Lambda1Case::Inconclusive;
  if (res.eqwv) ok = ok && res.eqwv->status == EmbeddingStatus::Holds;
  return emit(o, "equiv-norm", cfg, res.to_json(), ok ? 0 : 1);
}

Emitted cmd_check(const Options& o, const RunConfig& cfg) {
  const Weight w = weight_arg(o.weight, "--weight");
  if (o.relation == "sandwich" || o.relation == "eqwv") {
    const Weight v = weight_arg(o.v, "--v");
    const EmbeddingVerdict e =
        o.relation == "sandwich" ? check_sandwich(w, v, o.q.value_or(2.0), cfg) : check_eqwv(w, v, cfg);
    return emit(o, "check", cfg, e.to_json(), e.status == EmbeddingStatus::Fails ? 1 : 0);
  }
  if (o.relation == "ratio") {
    const NormSpec src = parse_norm_spec(require_json(o.source, "--source"), w, "--source");
    const NormSpec tgt = parse_norm_spec(require_json(o.target, "--target"), w, "--target");
    const WitnessFamily fam = parse_witness_family(require_json(o.family, "--family"), "--family");
    const EmbeddingVerdict e = norm_ratio_evidence(src, tgt, fam, cfg, o.threshold);
    return emit(o, "check", cfg, e.to_json(), 0, [&] { return csv(e.evidence->params, e.evidence->ratios); });
  }
  throw UsageError("--relation must be one of sandwich, eqwv, ratio");
}

Emitted cmd_gallery(const Options& o, const RunConfig& cfg) {
  const gallery::Registry reg = gallery::Registry::load_default();
  gallery::Summary sum;
  if (o.ids.empty()) {
    sum = gallery::run_all(reg, cfg, o.tag);
  } else {
    for (const auto& id : o.ids) {
      const gallery::Scenario* s = nullptr;
      try {
        s = &reg.find(id);
      } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
      }
      sum.rows.push_back(gallery::run(*s, cfg));
      (sum.rows.back().passed ? sum.passed : sum.failed) += 1;
    }
  }
  const int status = sum.all_passed() ? 0 : 1;
  if (o.format == "csv") throw UsageError("--format csv is not available for gallery");
  const std::string report = envelope("gallery", cfg, sum.to_json()).dump(2) + "\n";
  if (!o.out.empty()) {
    // The JSON report goes to the file; stdout keeps the requested format.
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot write '" + o.out + "'");
    f << report;
  }
  return {o.format == "json" ? report : sum.table(), status};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Lorentz space laboratory", "lorentz-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;
  bool format_given = false;

  const auto common = [&](CLI::App* sc) {
    sc->add_option("--grid-min", o.grid_min, "Smallest grid point");
    sc->add_option("--grid-max", o.grid_max, "Largest grid point");
    sc->add_option("--grid-per-decade", o.per_decade, "Grid points per decade");
    sc->add_option("--tol", o.tol, "Relative quadrature tolerance");
    sc->add_option("--threshold", o.threshold, "Blow-up threshold for verdicts and evidence");
    sc->add_option("--seed", o.seed, "Random seed recorded in the report");
    sc->add_option("--out", o.out, "Write the report to this file");
    sc->add_option("--format", o.format, "json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->each([&](const std::string&) { format_given = true; });
  };

  CLI::App* norm = app.add_subcommand("norm", "Evaluate a Lorentz or Gamma norm");
  norm->add_option("--space", o.space, "lambda, lambda-weak, gamma, gamma-weak, gamma-alpha");
  norm->add_option("--p", o.p, "Exponent p");
  norm->add_option("--q", o.q, "Exponent q (gamma)");
  norm->add_option("--alpha", o.alpha, "Exponent alpha (gamma-alpha)");
  norm->add_option("--weight", o.weight, "Weight spec (JSON)")->required();
  norm->add_option("--function", o.function, "Function spec (JSON)")->required();
  common(norm);

  CLI::App* cert = app.add_subcommand("certify", "Certify weight-class membership");
  cert->add_option("--class", o.cls, "bp, rp, rwt or qdp");
  cert->add_option("--p", o.p, "Exponent p");
  cert->add_option("--weight", o.weight, "Weight spec (JSON)")->required();
  common(cert);

  CLI::App* cwq = app.add_subcommand("construct-wq", "Build w_q and verify the two-sided identity");
  cwq->add_option("--q", o.q, "Exponent q >= 1 (default 1)");
  cwq->add_option("--weight", o.weight, "Weight spec (JSON)")->required();
  common(cwq);

  CLI::App* eqn = app.add_subcommand("equiv-norm", "Equivalent Gamma-type norm for Lambda^1(w)");
  eqn->add_option("--weight", o.weight, "Weight spec (JSON)")->required();
  common(eqn);

  CLI::App* chk = app.add_subcommand("check", "Check an embedding condition or a norm-ratio family");
  chk->add_option("--relation", o.relation, "sandwich, eqwv or ratio");
  chk->add_option("--weight", o.weight, "Weight spec (JSON)")->required();
  chk->add_option("--v", o.v, "Second weight spec (JSON)");
  chk->add_option("--q", o.q, "Exponent q (sandwich, default 2)");
  chk->add_option("--source", o.source, "Source norm spec (JSON, ratio)");
  chk->add_option("--target", o.target, "Target norm spec (JSON, ratio)");
  chk->add_option("--family", o.family, "Witness family spec (JSON, ratio)");
  common(chk);

  CLI::App* gal = app.add_subcommand("gallery", "Run registered scenarios");
  gal->add_option("ids", o.ids, "Scenario ids (default: all)");
  gal->add_option("--tag", o.tag, "Only scenarios carrying this tag");
  common(gal);

  std::vector<std::string> args;
  for (int k = argc - 1; k > 0; --k) args.emplace_back(argv[k]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const RunConfig cfg = make_config(o);
    Emitted e;
    if (gal->parsed()) {
      if (!format_given) o.format = "text";
      e = cmd_gallery(o, cfg);
      out << e.text;
      return e.status;
    }
    if (norm->parsed()) e = cmd_norm(o, cfg);
    else if (cert->parsed()) e = cmd_certify(o, cfg);
    else if (cwq->parsed()) e = cmd_construct(o, cfg);
    else if (eqn->parsed()) e = cmd_equiv(o, cfg);
    else e = cmd_check(o, cfg);
    if (o.out.empty()) {
      out << e.text;
    } else {
      std::ofstream f(o.out);
      if (!f) throw UsageError("cannot write '" + o.out + "'");
      f << e.text;
    }
    return e.status;
  } catch (const SpecError& e) {
    err << "error: invalid spec at " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lorentz
