#include "lorentz/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <variant>

namespace lorentz {

struct SumTerms {
  std::vector<DecreasingProfile> terms;
};
struct ScaledTerm {
  double k;
  std::vector<DecreasingProfile> inner;  // exactly one element
};

struct DecreasingProfile::Node {
  std::variant<StepFunction, DecayParams, SumTerms, ScaledTerm> data;
};

double DecayParams::cap() const {
  if (t0 == 0.0) return kInf;
  double v = c * std::pow(t0, -a);
  if (b != 0.0) v *= std::pow(std::log(t0), -b);
  return v;
}

namespace {

void validate_decay(const DecayParams& d) {
  if (!(d.c > 0.0) || !std::isfinite(d.c)) throw std::invalid_argument("decay: c must be positive");
  if (!(d.a >= 0.0) || !std::isfinite(d.a)) throw std::invalid_argument("decay: a must be >= 0");
  if (!std::isfinite(d.b)) throw std::invalid_argument("decay: b must be finite");
  if (!(d.t0 >= 0.0) || !std::isfinite(d.t0)) throw std::invalid_argument("decay: t0 must be >= 0");
  if (!(d.t1 > d.t0)) throw std::invalid_argument("decay: cut t1 must exceed t0");
  if (d.t0 == 0.0) {
    if (d.b != 0.0 || d.a >= 1.0)
      throw std::invalid_argument("decay: an uncapped profile needs b = 0 and a < 1");
    return;
  }
  if (d.b != 0.0) {
    if (d.t0 < 1.0 || (d.b > 0.0 && d.t0 == 1.0))
      throw std::invalid_argument("decay: log factor needs t0 > 1");
    if (d.a * std::log(d.t0) + d.b < 0.0)
      throw std::invalid_argument("decay: parameters give an increasing profile (a·log t0 + b < 0)");
  }
}

double decay_value(const DecayParams& d, double t) {
  if (t >= d.t1) return 0.0;
  if (t <= d.t0) return d.cap();
  double v = d.c * std::pow(t, -d.a);
  if (d.b != 0.0) v *= std::pow(std::log(t), -d.b);
  return v;
}

}  // namespace

double decay_integral(const DecayParams& d, double x0, double x1) {
  if (!(x1 > x0)) return 0.0;
  const double c = d.c;
  if (d.b == 0.0) {
    if (d.a == 1.0) return std::isinf(x1) ? kInf : c * std::log(x1 / x0);
    const double e = 1.0 - d.a;
    if (std::isinf(x1)) return e < 0.0 ? -c * std::pow(x0, e) / e : kInf;
    return c * (std::pow(x1, e) - std::pow(x0, e)) / e;
  }
  const double u0 = std::log(x0);
  const double u1 = std::isinf(x1) ? kInf : std::log(x1);
  if (d.a == 1.0) {
    if (d.b == 1.0) return std::isinf(u1) ? kInf : c * std::log(u1 / u0);
    const double e = 1.0 - d.b;
    if (std::isinf(u1)) return e < 0.0 ? -c * std::pow(u0, e) / e : kInf;
    return c * (std::pow(u1, e) - std::pow(u0, e)) / e;
  }
  if (std::isinf(u1) && d.a < 1.0) return kInf;
  // ∫ c·e^{(1-a)u}·u^{-b} du in the logarithmic variable.
  const double k = 1.0 - d.a;
  const auto g = [c, k, b = d.b](double u) { return c * std::exp(k * u) * std::pow(u, -b); };
  // Shift so the integration variable starts at 0 as integrate() expects.
  const auto h = [&g, u0](double s) { return g(u0 + s); };
  QuadOptions opts;
  opts.rel_tol = 1e-13;
  const QuadResult r = integrate(h, 0.0, std::isinf(u1) ? kInf : u1 - u0, {}, opts);
  return r.diverged ? kInf : r.value;
}

DecreasingProfile::DecreasingProfile()
    : node_(std::make_shared<const Node>(Node{StepFunction{}})) {}

DecreasingProfile::DecreasingProfile(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

DecreasingProfile DecreasingProfile::step(StepFunction f) {
  if (!f.is_nonincreasing())
    throw std::invalid_argument("decreasing step: values must be nonincreasing");
  return DecreasingProfile(std::make_shared<const Node>(Node{std::move(f)}));
}

DecreasingProfile DecreasingProfile::decay(const DecayParams& params) {
  validate_decay(params);
  return DecreasingProfile(std::make_shared<const Node>(Node{params}));
}

DecreasingProfile DecreasingProfile::sum(std::vector<DecreasingProfile> terms) {
  if (terms.empty()) return DecreasingProfile();
  return DecreasingProfile(std::make_shared<const Node>(Node{SumTerms{std::move(terms)}}));
}

DecreasingProfile DecreasingProfile::scaled(double k, DecreasingProfile inner) {
  if (!(k >= 0.0) || !std::isfinite(k))
    throw std::invalid_argument("scaled profile: factor must be finite and >= 0");
  return DecreasingProfile(std::make_shared<const Node>(Node{ScaledTerm{k, {std::move(inner)}}}));
}

DecreasingProfile::Kind DecreasingProfile::kind() const {
  return static_cast<Kind>(node_->data.index());
}

const StepFunction* DecreasingProfile::as_step() const {
  return std::get_if<StepFunction>(&node_->data);
}
const DecayParams* DecreasingProfile::as_decay() const {
  return std::get_if<DecayParams>(&node_->data);
}
std::span<const DecreasingProfile> DecreasingProfile::terms() const {
  if (const auto* s = std::get_if<SumTerms>(&node_->data)) return s->terms;
  return {};
}
double DecreasingProfile::scale() const {
  if (const auto* s = std::get_if<ScaledTerm>(&node_->data)) return s->k;
  return 1.0;
}
const DecreasingProfile* DecreasingProfile::inner() const {
  if (const auto* s = std::get_if<ScaledTerm>(&node_->data)) return &s->inner.front();
  return nullptr;
}

double DecreasingProfile::operator()(double t) const {
  return std::visit(
      [t](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StepFunction>) {
          return n(t);
        } else if constexpr (std::is_same_v<T, DecayParams>) {
          return decay_value(n, t);
        } else if constexpr (std::is_same_v<T, SumTerms>) {
          double s = 0.0;
          for (const auto& p : n.terms) s += p(t);
          return s;
        } else {
          return n.k * n.inner.front()(t);
        }
      },
      node_->data);
}

double DecreasingProfile::primitive(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("primitive: t must be >= 0");
  return std::visit(
      [t](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StepFunction>) {
          return n.primitive(t);
        } else if constexpr (std::is_same_v<T, DecayParams>) {
          if (n.t0 == 0.0) return decay_integral(n, 0.0, std::min(t, n.t1));
          const double head = n.cap() * std::min(t, n.t0);
          if (t <= n.t0) return head;
          return head + decay_integral(n, n.t0, std::min(t, n.t1));
        } else if constexpr (std::is_same_v<T, SumTerms>) {
          double s = 0.0;
          for (const auto& p : n.terms) s += p.primitive(t);
          return s;
        } else {
          if (n.k == 0.0) return 0.0;
          return n.k * n.inner.front().primitive(t);
        }
      },
      node_->data);
}

double DecreasingProfile::maximal(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("maximal: t must be > 0");
  return primitive(t) / t;
}

std::vector<double> DecreasingProfile::breakpoints() const {
  std::vector<double> out;
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StepFunction>) {
          out.assign(n.breakpoints().begin(), n.breakpoints().end());
        } else if constexpr (std::is_same_v<T, DecayParams>) {
          if (n.t0 > 0.0) out.push_back(n.t0);
          if (std::isfinite(n.t1)) out.push_back(n.t1);
        } else if constexpr (std::is_same_v<T, SumTerms>) {
          for (const auto& p : n.terms) {
            const auto b = p.breakpoints();
            out.insert(out.end(), b.begin(), b.end());
          }
        } else {
          out = n.inner.front().breakpoints();
        }
      },
      node_->data);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double DecreasingProfile::support_end() const {
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StepFunction>) {
          return n.support_end();
        } else if constexpr (std::is_same_v<T, DecayParams>) {
          return n.t1;
        } else if constexpr (std::is_same_v<T, SumTerms>) {
          double e = 0.0;
          for (const auto& p : n.terms) e = std::max(e, p.support_end());
          return e;
        } else {
          return n.k == 0.0 ? 0.0 : n.inner.front().support_end();
        }
      },
      node_->data);
}

bool DecreasingProfile::is_zero() const { return support_end() == 0.0; }

std::optional<DecreasingProfile> DecreasingProfile::pow(double p) const {
  if (!(p > 0.0)) throw std::invalid_argument("profile pow: exponent must be > 0");
  return std::visit(
      [p](const auto& n) -> std::optional<DecreasingProfile> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StepFunction>) {
          return DecreasingProfile::step(n.pow(p));
        } else if constexpr (std::is_same_v<T, DecayParams>) {
          return DecreasingProfile::decay({std::pow(n.c, p), n.a * p, n.b * p, n.t0, n.t1});
        } else if constexpr (std::is_same_v<T, SumTerms>) {
          return std::nullopt;
        } else {
          auto in = n.inner.front().pow(p);
          if (!in) return std::nullopt;
          return DecreasingProfile::scaled(std::pow(n.k, p), *in);
        }
      },
      node_->data);
}

DecreasingProfile rearrange(const StepFunction& f) {
  struct Block {
    double value;
    double length;
  };
  std::vector<Block> blocks;
  double left = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double len = f.breakpoints()[i] - left;
    if (f.values()[i] > 0.0) blocks.push_back({f.values()[i], len});
    left = f.breakpoints()[i];
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& x, const Block& y) { return x.value > y.value; });
  std::vector<double> breaks;
  std::vector<double> values;
  double acc = 0.0;
  for (const auto& b : blocks) {
    acc += b.length;
    breaks.push_back(acc);
    values.push_back(b.value);
  }
  return DecreasingProfile::step(StepFunction(std::move(breaks), std::move(values)));
}

}  // namespace lorentz
