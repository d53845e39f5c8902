#include "lorentz/weight.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>


namespace lorentz {

using nlohmann::json;

namespace detail {

struct WeightNode {
  virtual ~WeightNode() = default;
  virtual double value(double t) const = 0;
  virtual std::optional<double> primitive(double) const { return std::nullopt; }
  virtual std::optional<double> derivative(double) const { return std::nullopt; }
  virtual void breakpoints(std::vector<double>&) const {}
  virtual Smoothness smoothness() const = 0;
  virtual std::optional<double> limit_inf() const { return std::nullopt; }
  virtual std::optional<QuadResult> tail(double, double) const { return std::nullopt; }
  virtual double support_end() const { return kInf; }
  virtual std::optional<double> constant_value() const { return std::nullopt; }
  virtual json to_json() const = 0;
};

}  // namespace detail

namespace {

using detail::WeightNode;

double horizon_of(double r) { return std::ldexp(std::max(r, 1.0), 60); }

// ---------------------------------------------------------------------------
// t^γ·Σ c_k (log t)^k on (a, b). Also serves the power, char and const faces.

enum class LogPolyFace { LogPoly, Power, Char, Const };

class LogPolyNode final : public WeightNode {
 public:
  LogPolyNode(std::vector<double> coeffs, double gamma, double a, double b, LogPolyFace face)
      : c_(std::move(coeffs)), gamma_(gamma), a_(a), b_(b), face_(face) {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) c_.push_back(0.0);
    for (double x : c_)
      if (!std::isfinite(x)) throw std::invalid_argument("weight: coefficients must be finite");
    if (!std::isfinite(gamma_)) throw std::invalid_argument("weight: gamma must be finite");
    if (!(a_ >= 0.0) || !(b_ > a_) || std::isinf(a_))
      throw std::invalid_argument("weight: support (a, b) needs 0 <= a < b");
    if (a_ == 0.0 && !(gamma_ > -1.0) && !zero())
      throw std::invalid_argument("weight: not locally integrable at 0 (requires gamma > -1)");
    check_sign();
  }

  double value(double t) const override {
    if (!(t > a_) || t >= b_) return 0.0;
    return inner(t);
  }

  std::optional<double> constant_value() const override {
    if (a_ == 0.0 && std::isinf(b_) && (zero() || (gamma_ == 0.0 && c_.size() == 1))) return c_[0];
    return std::nullopt;
  }

  std::optional<double> primitive(double t) const override {
    if (t <= a_) return 0.0;
    return antideriv(std::min(t, b_), gamma_) - lower(gamma_);
  }

  std::optional<double> derivative(double t) const override {
    if (!(t > a_) || t >= b_) return 0.0;
    const double L = std::log(t);
    double p = 0.0;
    double dp = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) {
      dp = dp * L + p;
      p = p * L + c_[k];
    }
    return std::pow(t, gamma_ - 1.0) * (gamma_ * p + dp);
  }

  void breakpoints(std::vector<double>& out) const override {
    if (a_ > 0.0) out.push_back(a_);
    if (std::isfinite(b_)) out.push_back(b_);
  }

  Smoothness smoothness() const override {
    if (zero()) return Smoothness::C1;
    bool jump = false;
    bool kink = false;
    const auto edge = [&](double x) {
      const double v = inner(x);
      if (std::abs(v) > 1e-12 * std::max(1.0, scale_at(x))) jump = true;
      else kink = true;
    };
    if (a_ > 0.0) edge(a_);
    if (std::isfinite(b_)) edge(b_);
    if (jump) return Smoothness::Discontinuous;
    if (kink) return Smoothness::Continuous;
    return Smoothness::C1;
  }

  std::optional<double> limit_inf() const override {
    if (std::isfinite(b_) || zero()) return 0.0;
    if (gamma_ < 0.0) return 0.0;
    if (gamma_ == 0.0 && c_.size() == 1) return c_[0];
    return kInf;
  }

  std::optional<QuadResult> tail(double r, double p) const override {
    QuadResult q;
    q.pieces_used = 1;
    const double lo = std::max(r, a_);
    if (zero() || lo >= b_) return q;
    const double g = gamma_ - p;
    if (std::isinf(b_) && g >= -1.0) {
      q.diverged = true;
      q.value = antideriv(horizon_of(r), g) - antideriv(lo, g);
      q.abs_error = kInf;
      return q;
    }
    const double hi = std::isinf(b_) ? 0.0 : antideriv(b_, g);
    q.value = hi - antideriv(lo, g);
    return q;
  }

  double support_end() const override { return zero() ? 0.0 : b_; }

  json to_json() const override {
    switch (face_) {
      case LogPolyFace::Const:
        return {{"kind", "const"}, {"c", c_[0]}};
      case LogPolyFace::Char:
        return {{"kind", "char"}, {"a", a_}, {"b", edge_json(b_)}};
      case LogPolyFace::Power: {
        json j = {{"kind", "power"}, {"gamma", gamma_}, {"a", a_}, {"b", edge_json(b_)}};
        if (c_[0] != 1.0) j["c"] = c_[0];
        return j;
      }
      case LogPolyFace::LogPoly:
        break;
    }
    return {{"kind", "logpoly"}, {"coeffs", c_}, {"gamma", gamma_}, {"a", a_}, {"b", edge_json(b_)}};
  }

 private:
  static json edge_json(double x) { return std::isinf(x) ? json("inf") : json(x); }

  bool zero() const { return c_.size() == 1 && c_[0] == 0.0; }

  double inner(double t) const {
    const double L = std::log(t);
    double p = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) p = p * L + c_[k];
    return gamma_ == 0.0 ? p : std::pow(t, gamma_) * p;
  }

  double scale_at(double t) const {
    const double L = std::abs(std::log(t));
    double s = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) s = s * L + std::abs(c_[k]);
    return std::pow(t, gamma_) * s;
  }

  // ∫ t^g Σ c_k L^k dt at t (antiderivative with zero constant).
  double antideriv(double t, double g) const {
    const double L = std::log(t);
    double total = 0.0;
    if (g == -1.0) {
      for (std::size_t k = 0; k < c_.size(); ++k)
        total += c_[k] * std::pow(L, static_cast<double>(k + 1)) / static_cast<double>(k + 1);
      return total;
    }
    const double m = g + 1.0;
    const double tm = std::pow(t, m);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0.0) continue;
      // Σ_j (−1)^j k!/(k−j)! L^{k−j} / m^{j+1}
      double s = 0.0;
      double fall = 1.0;
      for (std::size_t j = 0; j <= k; ++j) {
        s += ((j % 2) ? -1.0 : 1.0) * fall * std::pow(L, static_cast<double>(k - j)) /
             std::pow(m, static_cast<double>(j + 1));
        fall *= static_cast<double>(k - j);
      }
      total += c_[k] * tm * s;
    }
    return total;
  }

  double lower(double g) const { return a_ == 0.0 ? 0.0 : antideriv(a_, g); }

  void check_sign() const {
    if (zero()) return;
    const double lo = a_ > 0.0 ? a_ : 1e-12;
    const double hi = std::isfinite(b_) ? b_ : 1e12;
    const int n = 1000;
    for (int k = 0; k <= n; ++k) {
      const double t = lo * std::pow(hi / lo, static_cast<double>(k) / n);
      const double v = inner(t);
      if (v < -1e-12 * std::max(1.0, scale_at(t)))
        throw std::invalid_argument("weight: negative on its support near t = " + std::to_string(t));
    }
  }

  std::vector<double> c_;
  double gamma_;
  double a_;
  double b_;
  LogPolyFace face_;
};

// ---------------------------------------------------------------------------

class ExpNode final : public WeightNode {
 public:
  ExpNode(double c, double rate) : c_(c), rate_(rate) {
    if (!(c_ >= 0.0) || !(rate_ > 0.0) || !std::isfinite(c_) || !std::isfinite(rate_))
      throw std::invalid_argument("exp weight: need c >= 0 and rate > 0");
  }
  double value(double t) const override { return t > 0.0 ? c_ * std::exp(-rate_ * t) : 0.0; }
  std::optional<double> primitive(double t) const override {
    return -c_ * std::expm1(-rate_ * t) / rate_;
  }
  std::optional<double> derivative(double t) const override { return -rate_ * value(t); }
  Smoothness smoothness() const override { return Smoothness::C1; }
  std::optional<double> limit_inf() const override { return 0.0; }
  json to_json() const override { return {{"kind", "exp"}, {"c", c_}, {"rate", rate_}}; }

 private:
  double c_;
  double rate_;
};

class ShiftedPowerNode final : public WeightNode {
 public:
  ShiftedPowerNode(double c, double shift, double gamma) : c_(c), s_(shift), g_(gamma) {
    if (!(c_ >= 0.0) || !(s_ > 0.0) || !std::isfinite(g_) || !std::isfinite(c_))
      throw std::invalid_argument("shifted power weight: need c >= 0, shift > 0");
  }
  double value(double t) const override { return t > 0.0 ? c_ * std::pow(s_ + t, g_) : 0.0; }
  std::optional<double> primitive(double t) const override {
    if (t <= 0.0) return 0.0;
    const double lp = std::log1p(t / s_);
    if (g_ == -1.0) return c_ * lp;
    const double m = g_ + 1.0;
    return c_ * std::pow(s_, m) * std::expm1(m * lp) / m;
  }
  std::optional<double> derivative(double t) const override {
    return c_ * g_ * std::pow(s_ + t, g_ - 1.0);
  }
  Smoothness smoothness() const override { return Smoothness::C1; }
  std::optional<double> limit_inf() const override {
    if (c_ == 0.0 || g_ < 0.0) return 0.0;
    return g_ == 0.0 ? c_ : kInf;
  }
  json to_json() const override {
    return {{"kind", "shifted_power"}, {"c", c_}, {"shift", s_}, {"gamma", g_}};
  }

 private:
  double c_;
  double s_;
  double g_;
};

class StepNode final : public WeightNode {
 public:
  explicit StepNode(StepFunction f) : f_(std::move(f)) {}
  double value(double t) const override { return f_(t); }
  std::optional<double> primitive(double t) const override { return f_.primitive(t); }
  void breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), f_.breakpoints().begin(), f_.breakpoints().end());
  }
  Smoothness smoothness() const override {
    return f_.empty() ? Smoothness::C1 : Smoothness::Discontinuous;
  }
  std::optional<double> limit_inf() const override { return 0.0; }
  std::optional<QuadResult> tail(double r, double p) const override {
    QuadResult q;
    q.pieces_used = f_.size();
    double left = 0.0;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const double lo = std::max(left, r);
      const double hi = f_.breakpoints()[i];
      left = hi;
      if (hi <= lo) continue;
      const double piece = p == 1.0 ? std::log(hi / lo)
                                    : (std::pow(hi, 1.0 - p) - std::pow(lo, 1.0 - p)) / (1.0 - p);
      q.value += f_.values()[i] * piece;
    }
    return q;
  }
  double support_end() const override { return f_.support_end(); }
  json to_json() const override {
    return {{"kind", "step"},
            {"breakpoints", std::vector<double>(f_.breakpoints().begin(), f_.breakpoints().end())},
            {"values", std::vector<double>(f_.values().begin(), f_.values().end())}};
  }

 private:
  StepFunction f_;
};

class TabulatedNode final : public WeightNode {
 public:
  TabulatedNode(std::vector<double> grid, std::vector<double> values, std::optional<double> tail_exp)
      : g_(std::move(grid)), v_(std::move(values)) {
    if (g_.size() != v_.size() || g_.size() < 2)
      throw std::invalid_argument("tabulated weight: need >= 2 grid points matching values");
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (!(g_[k] > 0.0) || !std::isfinite(g_[k]) || (k > 0 && !(g_[k] > g_[k - 1])))
        throw std::invalid_argument("tabulated weight: grid must be positive and strictly increasing");
      if (!(v_[k] >= 0.0) || !std::isfinite(v_[k]))
        throw std::invalid_argument("tabulated weight: values must be finite and nonnegative");
    }
    cum_.resize(g_.size());
    cum_[0] = v_[0] * g_[0];
    for (std::size_t k = 1; k < g_.size(); ++k)
      cum_[k] = cum_[k - 1] + 0.5 * (v_[k] + v_[k - 1]) * (g_[k] - g_[k - 1]);
    tail_a_ = tail_exp ? *tail_exp : fit_tail();
    tail_c_ = v_.back() * std::pow(g_.back(), tail_a_);
  }

  double value(double t) const override {
    if (t <= g_.front()) return t > 0.0 ? v_.front() : 0.0;
    if (t >= g_.back()) return tail_c_ * std::pow(t, -tail_a_);
    const auto it = std::upper_bound(g_.begin(), g_.end(), t);
    const auto k = static_cast<std::size_t>(it - g_.begin());
    const double s = (t - g_[k - 1]) / (g_[k] - g_[k - 1]);
    return v_[k - 1] + s * (v_[k] - v_[k - 1]);
  }

  std::optional<double> primitive(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t <= g_.front()) return v_.front() * t;
    if (t >= g_.back()) {
      const double x0 = g_.back();
      double tail = 0.0;
      if (tail_c_ > 0.0) {
        tail = tail_a_ == 1.0 ? tail_c_ * std::log(t / x0)
                              : tail_c_ * (std::pow(t, 1.0 - tail_a_) - std::pow(x0, 1.0 - tail_a_)) /
                                    (1.0 - tail_a_);
      }
      return cum_.back() + tail;
    }
    const auto it = std::upper_bound(g_.begin(), g_.end(), t);
    const auto k = static_cast<std::size_t>(it - g_.begin());
    const double vt = value(t);
    return cum_[k - 1] + 0.5 * (v_[k - 1] + vt) * (t - g_[k - 1]);
  }

  void breakpoints(std::vector<double>& out) const override { out.insert(out.end(), g_.begin(), g_.end()); }
  Smoothness smoothness() const override { return Smoothness::Continuous; }
  std::optional<double> limit_inf() const override {
    if (tail_c_ == 0.0 || tail_a_ > 0.0) return 0.0;
    return tail_a_ == 0.0 ? tail_c_ : kInf;
  }
  json to_json() const override {
    return {{"kind", "tabulated"}, {"grid", g_}, {"values", v_}, {"tail_exponent", tail_a_}};
  }

 private:
  // Least-squares slope of log v against log t over the last decade.
  double fit_tail() const {
    const double cut = g_.back() / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (g_[k] < cut) continue;
      if (v_[k] <= 0.0) return 0.0;
      const double x = std::log(g_[k]);
      const double y = std::log(v_[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n < 2) return 0.0;
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return 0.0;
    return -(n * sxy - sx * sy) / den;
  }

  std::vector<double> g_;
  std::vector<double> v_;
  std::vector<double> cum_;
  double tail_a_ = 0.0;
  double tail_c_ = 0.0;
};

class SumNode final : public WeightNode {
 public:
  explicit SumNode(std::vector<Weight> terms) : t_(std::move(terms)) {}
  double value(double t) const override {
    double s = 0.0;
    for (const auto& w : t_) s += w(t);
    return s;
  }
  std::optional<double> primitive(double t) const override {
    double s = 0.0;
    for (const auto& w : t_) {
      if (!w.has_closed_primitive()) return std::nullopt;
      s += w.W(t);
    }
    return s;
  }
  std::optional<double> derivative(double t) const override {
    double s = 0.0;
    for (const auto& w : t_) {
      const auto d = w.derivative(t);
      if (!d) return std::nullopt;
      s += *d;
    }
    return s;
  }
  void breakpoints(std::vector<double>& out) const override {
    for (const auto& w : t_) {
      const auto b = w.breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
  }
  Smoothness smoothness() const override {
    Smoothness s = Smoothness::C1;
    for (const auto& w : t_) s = std::min(s, w.smoothness());
    return s;
  }
  std::optional<double> limit_inf() const override {
    double s = 0.0;
    for (const auto& w : t_) {
      const auto l = w.closed_limit_at_infinity();
      if (!l) return std::nullopt;
      s += *l;
    }
    return s;
  }
  std::optional<QuadResult> tail(double r, double p) const override {
    QuadResult q;
    for (const auto& w : t_) q += w.tail_moment(r, p);
    return q;
  }
  double support_end() const override {
    double e = 0.0;
    for (const auto& w : t_) e = std::max(e, w.support_end());
    return e;
  }
  json to_json() const override {
    json terms = json::array();
    for (const auto& w : t_) terms.push_back(w.to_json());
    return {{"kind", "sum"}, {"terms", terms}};
  }

 private:
  std::vector<Weight> t_;
};

class ProductNode final : public WeightNode {
 public:
  explicit ProductNode(std::vector<Weight> terms) : t_(std::move(terms)) {
    if (t_.empty()) throw std::invalid_argument("product weight: needs at least one term");
  }
  double value(double t) const override {
    double s = 1.0;
    for (const auto& w : t_) {
      const double v = w(t);
      if (v == 0.0) return 0.0;
      s *= v;
    }
    return s;
  }
  std::optional<double> derivative(double t) const override {
    double total = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const auto d = t_[i].derivative(t);
      if (!d) return std::nullopt;
      double term = *d;
      for (std::size_t j = 0; j < t_.size(); ++j)
        if (j != i) term *= t_[j](t);
      total += term;
    }
    return total;
  }
  void breakpoints(std::vector<double>& out) const override {
    for (const auto& w : t_) {
      const auto b = w.breakpoints();
      out.insert(out.end(), b.begin(), b.end());
    }
  }
  Smoothness smoothness() const override {
    Smoothness s = Smoothness::C1;
    for (const auto& w : t_) s = std::min(s, w.smoothness());
    return s;
  }
  std::optional<double> limit_inf() const override {
    double s = 1.0;
    bool zero = false;
    bool inf = false;
    for (const auto& w : t_) {
      const auto l = w.closed_limit_at_infinity();
      if (!l) return std::nullopt;
      if (*l == 0.0) zero = true;
      if (std::isinf(*l)) inf = true;
      s *= *l;
    }
    if (zero && inf) return std::nullopt;
    return zero ? 0.0 : s;
  }
  double support_end() const override {
    double e = kInf;
    for (const auto& w : t_) e = std::min(e, w.support_end());
    return e;
  }
  json to_json() const override {
    json terms = json::array();
    for (const auto& w : t_) terms.push_back(w.to_json());
    return {{"kind", "product"}, {"terms", terms}};
  }

 private:
  std::vector<Weight> t_;
};

class DilatedNode final : public WeightNode {
 public:
  DilatedNode(Weight inner, double c) : in_(std::move(inner)), c_(c) {
    if (!(c_ > 0.0) || !std::isfinite(c_)) throw std::invalid_argument("dilated weight: c must be > 0");
  }
  double value(double t) const override { return in_(c_ * t); }
  std::optional<double> primitive(double t) const override {
    if (!in_.has_closed_primitive()) return std::nullopt;
    return in_.W(c_ * t) / c_;
  }
  std::optional<double> derivative(double t) const override {
    const auto d = in_.derivative(c_ * t);
    if (!d) return std::nullopt;
    return c_ * *d;
  }
  void breakpoints(std::vector<double>& out) const override {
    for (double b : in_.breakpoints()) out.push_back(b / c_);
  }
  Smoothness smoothness() const override { return in_.smoothness(); }
  std::optional<double> limit_inf() const override { return in_.closed_limit_at_infinity(); }
  std::optional<QuadResult> tail(double r, double p) const override {
    QuadResult q = in_.tail_moment(c_ * r, p);
    const double k = std::pow(c_, p - 1.0);
    q.value *= k;
    q.abs_error *= k;
    return q;
  }
  double support_end() const override { return in_.support_end() / c_; }
  json to_json() const override { return {{"kind", "dilated"}, {"inner", in_.to_json()}, {"c", c_}}; }

 private:
  Weight in_;
  double c_;
};

class OffsetNode final : public WeightNode {
 public:
  OffsetNode(Weight inner, double delta) : in_(std::move(inner)), d_(delta) {
    if (!(d_ >= 0.0) || !std::isfinite(d_)) throw std::invalid_argument("offset weight: delta must be >= 0");
  }
  double value(double t) const override { return std::max(0.0, in_(t) - d_); }
  std::optional<double> primitive(double t) const override {
    if (!in_.has_closed_primitive()) return std::nullopt;
    return std::max(0.0, in_.W(t) - d_ * t);
  }
  std::optional<double> derivative(double t) const override { return in_.derivative(t); }
  void breakpoints(std::vector<double>& out) const override {
    const auto b = in_.breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  Smoothness smoothness() const override { return in_.smoothness(); }
  std::optional<double> limit_inf() const override {
    const auto l = in_.closed_limit_at_infinity();
    if (!l) return std::nullopt;
    return std::max(0.0, *l - d_);
  }
  double support_end() const override { return d_ > 0.0 ? kInf : in_.support_end(); }
  json to_json() const override { return {{"kind", "offset"}, {"inner", in_.to_json()}, {"delta", d_}}; }

 private:
  Weight in_;
  double d_;
};

// One level of Φ-smoothing: primitive Φ(t) = (1/t)∫_t^{2t} W(s) ds.
class SmoothedNode final : public WeightNode {
 public:
  explicit SmoothedNode(Weight inner) : in_(std::move(inner)), end_(in_.support_end()) {
    for (double b : in_.breakpoints()) {
      if (!std::isfinite(b)) continue;
      bps_.push_back(b);
      bps_.push_back(0.5 * b);
    }
    std::sort(bps_.begin(), bps_.end());
    bps_.erase(std::unique(bps_.begin(), bps_.end()), bps_.end());
    inner_bps_ = in_.breakpoints();
  }

  double Phi(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= end_) return in_.W(end_);
    const auto cuts = panel_cuts(t, 2.0 * t, inner_bps_);
    const auto Wf = [this](double s) { return in_.W(s); };
    // W is analytic on each panel and its nearest singularity (0) sits at least
    // three half-widths away, so a fixed 10-point rule is at rounding level.
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      acc += boost::math::quadrature::gauss<double, 10>::integrate(Wf, cuts[k], cuts[k + 1]);
    return acc / t;
  }

  double value(double t) const override {
    if (t <= 0.0 || t >= end_) return 0.0;
    return (2.0 * in_.W(2.0 * t) - in_.W(t) - Phi(t)) / t;
  }
  std::optional<double> primitive(double t) const override { return Phi(t); }
  std::optional<double> derivative(double t) const override {
    if (t <= 0.0 || t >= end_) return 0.0;
    return (4.0 * in_(2.0 * t) - in_(t) - 2.0 * value(t)) / t;
  }
  void breakpoints(std::vector<double>& out) const override { out.insert(out.end(), bps_.begin(), bps_.end()); }
  Smoothness smoothness() const override {
    return static_cast<Smoothness>(std::min(2, static_cast<int>(in_.smoothness()) + 1));
  }
  std::optional<double> limit_inf() const override { return in_.closed_limit_at_infinity(); }
  double support_end() const override { return end_; }
  json to_json() const override {
    // Collapse nested levels into a depth count.
    int depth = 1;
    json inner = in_.to_json();
    while (inner.value("kind", "") == "smoothed") {
      depth += inner.value("depth", 1);
      inner = inner.at("inner");
    }
    return {{"kind", "smoothed"}, {"inner", inner}, {"depth", depth}};
  }

 private:
  Weight in_;
  double end_;
  std::vector<double> bps_;
  std::vector<double> inner_bps_;
};

class WqNode final : public WeightNode {
 public:
  WqNode(Weight base, double q) : base_(std::move(base)), q_(q) {
    if (!(q_ >= 1.0) || !std::isfinite(q_)) throw std::invalid_argument("w_q: q must be >= 1");
    if (!base_.derivative(1.0))
      throw std::invalid_argument("w_q: base weight has no derivative; smooth it first");
  }
  double value(double t) const override {
    if (t <= 0.0 || t >= base_.support_end()) return 0.0;
    const auto terms = wq_terms(base_.W(t), base_(t), *base_.derivative(t), q_, t);
    return std::max(0.0, terms.raw);
  }
  void breakpoints(std::vector<double>& out) const override {
    const auto b = base_.breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  Smoothness smoothness() const override { return Smoothness::Continuous; }
  double support_end() const override { return base_.support_end(); }
  json to_json() const override { return {{"kind", "wq"}, {"base", base_.to_json()}, {"q", q_}}; }

 private:
  Weight base_;
  double q_;
};

}  // namespace

// ---------------------------------------------------------------------------

WqTerms wq_terms(double W, double w, double dw, double q, double r) {
  // w_q(r) = −r[(q−1)W^{q−2}w² + W^{q−1}w'] + (q−1)W^{q−1}w
  // The scale also carries W^{q−1}w so that rounding noise around an exact
  // zero (a locally constant w) is not mistaken for a negative excursion.
  const double Wq1 = q == 1.0 ? 1.0 : std::pow(W, q - 1.0);
  const double a = q == 1.0 ? 0.0 : (q - 1.0) * (W > 0.0 ? std::pow(W, q - 2.0) : 0.0) * w * w * r;
  const double b = Wq1 * dw * r;
  const double c = (q - 1.0) * Wq1 * w;
  return {c - a - b, std::abs(a) + std::abs(b) + std::abs(c) + Wq1 * std::abs(w)};
}

Weight::Weight(std::shared_ptr<const detail::WeightNode> node) : node_(std::move(node)) {}

Weight Weight::power(double gamma, double a, double b, double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("power weight: c must be >= 0");
  return Weight(std::make_shared<LogPolyNode>(std::vector<double>{c}, gamma, a, b, LogPolyFace::Power));
}
Weight Weight::log_poly(std::vector<double> coeffs, double gamma, double a, double b) {
  return Weight(std::make_shared<LogPolyNode>(std::move(coeffs), gamma, a, b, LogPolyFace::LogPoly));
}
Weight Weight::characteristic(double a, double b) {
  return Weight(std::make_shared<LogPolyNode>(std::vector<double>{1.0}, 0.0, a, b, LogPolyFace::Char));
}
Weight Weight::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("const weight: c must be >= 0");
  return Weight(std::make_shared<LogPolyNode>(std::vector<double>{c}, 0.0, 0.0, kInf, LogPolyFace::Const));
}
Weight Weight::exponential(double c, double rate) { return Weight(std::make_shared<ExpNode>(c, rate)); }
Weight Weight::shifted_power(double c, double shift, double gamma) {
  return Weight(std::make_shared<ShiftedPowerNode>(c, shift, gamma));
}
Weight Weight::step(StepFunction f) { return Weight(std::make_shared<StepNode>(std::move(f))); }
Weight Weight::tabulated(std::vector<double> grid, std::vector<double> values,
                         std::optional<double> tail_exponent) {
  return Weight(std::make_shared<TabulatedNode>(std::move(grid), std::move(values), tail_exponent));
}
Weight Weight::sum(std::vector<Weight> terms) { return Weight(std::make_shared<SumNode>(std::move(terms))); }
Weight Weight::product(std::vector<Weight> terms) {
  return Weight(std::make_shared<ProductNode>(std::move(terms)));
}
Weight Weight::dilated(Weight inner, double c) {
  return Weight(std::make_shared<DilatedNode>(std::move(inner), c));
}
Weight Weight::offset(Weight inner, double delta) {
  return Weight(std::make_shared<OffsetNode>(std::move(inner), delta));
}
Weight Weight::smoothed(Weight inner, int depth) {
  if (depth < 1 || depth > 4) throw std::invalid_argument("smoothed weight: depth must be 1..4");
  Weight w = std::move(inner);
  for (int k = 0; k < depth; ++k) w = Weight(std::make_shared<SmoothedNode>(std::move(w)));
  return w;
}
Weight Weight::wq(Weight base, double q) { return Weight(std::make_shared<WqNode>(std::move(base), q)); }

double Weight::operator()(double t) const { return node_->value(t); }

double Weight::W(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("W: t must be >= 0");
  if (t == 0.0) return 0.0;
  if (auto p = node_->primitive(t)) return *p;
  QuadOptions opts;
  opts.rel_tol = 1e-13;
  const auto bps = breakpoints();
  return integrate([this](double s) { return node_->value(s); }, 0.0, t, bps, opts).value;
}

std::optional<double> Weight::constant_value() const { return node_->constant_value(); }

bool Weight::has_closed_primitive() const { return node_->primitive(1.0).has_value(); }

std::optional<double> Weight::derivative(double t) const { return node_->derivative(t); }

QuadResult Weight::tail_moment(double r, double p) const {
  if (!(r > 0.0)) throw std::invalid_argument("tail_moment: r must be > 0");
  if (auto t = node_->tail(r, p)) return *t;
  const double end = support_end();
  if (r >= end) return {};
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  const auto bps = breakpoints();
  const auto f = [this, p](double s) { return node_->value(s) * std::pow(s, -p); };
  return integrate(f, r, end, bps, opts);
}

bool Weight::has_closed_tail(double p) const { return node_->tail(1.0, p).has_value(); }

std::vector<double> Weight::breakpoints() const {
  std::vector<double> out;
  node_->breakpoints(out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Smoothness Weight::smoothness() const { return node_->smoothness(); }
double Weight::support_end() const { return node_->support_end(); }
std::optional<double> Weight::closed_limit_at_infinity() const { return node_->limit_inf(); }

bool Weight::is_decreasing() const {
  if (declared_decreasing_) return *declared_decreasing_;
  return sampled_decreasing(*this);
}

Weight Weight::declare_decreasing(bool value) const {
  Weight w(*this);
  w.declared_decreasing_ = value;
  return w;
}

json Weight::to_json() const {
  json j = node_->to_json();
  if (declared_decreasing_) j["decreasing"] = *declared_decreasing_;
  return j;
}

bool sampled_decreasing(const Weight& w) {
  const auto grid = log_grid(1e-6, 1e6, 83);  // 997 intervals, 998 points
  double prev = w(grid.front());
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double v = w(grid[k]);
    if (v > prev * (1.0 + 1e-9) + 1e-300) return false;
    prev = v;
  }
  return true;
}

std::optional<double> limit_at_infinity(const Weight& w) {
  if (!w.is_decreasing()) return std::nullopt;
  if (auto l = w.closed_limit_at_infinity()) return *l;
  double inf = w(1.0);
  for (int k = 1; k <= 60; ++k) inf = std::min(inf, w(std::ldexp(1.0, k)));
  return inf;
}

double limit_at_zero(const Weight& w) {
  const double near = w(1e-15);
  const double far = w(1e-9);
  if (!std::isfinite(near)) return kInf;
  if (near > far * (1.0 + 1e-6) + 1e-300) return kInf;
  return near;
}

}  // namespace lorentz
