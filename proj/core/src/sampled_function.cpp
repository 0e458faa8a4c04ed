#include "ofrac/sampled_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ofrac/errors.hpp"

namespace ofrac {

double TailModel::value(double y) const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return coefficient(y);
    case Kind::Decay: return coefficient(y) * std::pow(std::abs(y), -alpha);
  }
  return 0.0;
}

const char* to_string(TailModel::Kind kind) noexcept {
  switch (kind) {
    case TailModel::Kind::Zero: return "zero";
    case TailModel::Kind::Constant: return "constant";
    case TailModel::Kind::Decay: return "decay";
  }
  return "zero";
}

SampledFunction SampledFunction::closed_form(std::string name, std::function<double(double)> f,
                                             double core_half_width, TailModel tail,
                                             std::vector<double> breakpoints,
                                             std::optional<double> lipschitz_hint) {
  if (!f) throw ValidationError("closed-form function without evaluator");
  if (!(core_half_width > 0.0)) throw ValidationError("core half-width must be positive");
  SampledFunction u;
  u.name_ = std::move(name);
  u.f_ = std::move(f);
  u.L_ = core_half_width;
  u.tail_ = tail;
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  u.breakpoints_ = std::move(breakpoints);
  u.lipschitz_ = lipschitz_hint;
  return u;
}

SampledFunction SampledFunction::grid(double L, std::vector<double> values, TailModel tail,
                                      std::optional<double> lipschitz_hint) {
  if (!(L > 0.0)) throw ValidationError("grid half-width L must be positive");
  if (values.size() < 2) throw ValidationError("grid needs at least two values");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("grid values must be finite");
  auto matches = [](double boundary, double tail_value) {
    return std::abs(boundary - tail_value) <=
           0.1 * std::max(std::abs(boundary), std::abs(tail_value)) + 1e-12;
  };
  if (!matches(values.back(), tail.value(L)) || !matches(values.front(), tail.value(-L)))
    throw ValidationError("tail model not continuous with boundary values (10% rule)");
  SampledFunction u;
  u.name_ = "grid";
  u.values_ = std::move(values);
  u.L_ = L;
  u.tail_ = tail;
  u.lipschitz_ = lipschitz_hint;
  u.breakpoints_ = u.nodes();
  if (lipschitz_hint) {
    const double h = u.spacing();
    for (std::size_t i = 0; i + 1 < u.values_.size(); ++i)
      if (std::abs(u.values_[i + 1] - u.values_[i]) > *lipschitz_hint * h * (1.0 + 1e-9))
        throw ValidationError("grid differences exceed the Lipschitz hint");
  }
  return u;
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& f, double L,
                                        std::size_t n, TailModel tail,
                                        std::optional<double> lipschitz_hint) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = f(-L + 2.0 * L * static_cast<double>(i) / static_cast<double>(n - 1));
  return grid(L, std::move(v), tail, lipschitz_hint);
}

std::vector<double> SampledFunction::nodes() const {
  std::vector<double> x(values_.size());
  const double h = spacing();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -L_ + h * static_cast<double>(i);
  if (!x.empty()) x.back() = L_;
  return x;
}

double SampledFunction::spacing() const {
  if (values_.size() < 2) return 0.0;
  return 2.0 * L_ / static_cast<double>(values_.size() - 1);
}

double SampledFunction::operator()(double x) const {
  if (!is_grid()) return f_(x);
  if (x < -L_ || x > L_) return tail_.value(x);
  const double h = spacing();
  const double pos = (x + L_) / h;
  auto i = static_cast<std::size_t>(pos);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double frac = pos - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

SampledFunction SampledFunction::scaled(double factor) const {
  SampledFunction u = *this;
  u.tail_.c *= factor;
  u.tail_.c_left *= factor;
  if (u.lipschitz_) *u.lipschitz_ *= std::abs(factor);
  if (is_grid()) {
    for (double& v : u.values_) v *= factor;
  } else {
    auto f = f_;
    u.f_ = [f, factor](double x) { return factor * f(x); };
  }
  return u;
}

SampledFunction SampledFunction::shifted(double shift) const {
  auto self = std::make_shared<SampledFunction>(*this);
  std::vector<double> bps;
  for (double b : breakpoints_) bps.push_back(b + shift);
  auto u = closed_form(name_ + "_shifted", [self, shift](double x) { return (*self)(x - shift); },
                       L_ + std::abs(shift), tail_, std::move(bps), lipschitz_);
  return u;
}

double SampledFunction::sup_abs() const {
  if (tail_.kind == TailModel::Kind::Decay && tail_.alpha < 0.0 &&
      (tail_.c != 0.0 || tail_.c_left != 0.0))
    return std::numeric_limits<double>::infinity();
  double s = 0.0;
  if (is_grid()) {
    for (double v : values_) s = std::max(s, std::abs(v));
  } else {
    for (int i = 0; i <= 4000; ++i) s = std::max(s, std::abs(f_(-L_ + 2.0 * L_ * i / 4000.0)));
    for (double b : breakpoints_) s = std::max(s, std::abs(f_(b)));
  }
  s = std::max({s, std::abs(tail_.value(L_)), std::abs(tail_.value(-L_))});
  return s;
}

double SampledFunction::oscillation() const {
  if (!std::isfinite(sup_abs())) return std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto see = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  if (is_grid()) {
    for (double v : values_) see(v);
  } else {
    for (int i = 0; i <= 4000; ++i) see(f_(-L_ + 2.0 * L_ * i / 4000.0));
    for (double b : breakpoints_) see(f_(b));
  }
  // Tail values between the boundary and infinity.
  for (double y : {L_, -L_}) see(tail_.value(y));
  if (tail_.kind == TailModel::Kind::Decay && tail_.alpha > 0.0) see(0.0);
  return hi - lo;
}

// ---------------------------------------------------------------------------

double bump_value(double x, double center, double radius, double height) {
  const double z = (x - center) / radius;
  if (std::abs(z) >= 1.0) return 0.0;
  return height * std::exp(1.0 - 1.0 / (1.0 - z * z));
}

std::vector<GeneratorInfo> list_generators() {
  std::vector<GeneratorInfo> g{
      {"abs", "|x - center|", {{"center", 0.0}, {"L", 4.0}}},
      {"bump", "height exp(1 - 1/(1 - z^2)), z = (x - center)/radius",
       {{"center", 0.0}, {"radius", 1.0}, {"height", 1.0}}},
      {"constant", "c", {{"c", 1.0}}},
      {"linear", "slope x + offset", {{"slope", 1.0}, {"offset", 0.0}, {"L", 4.0}}},
      {"quadratic", "a x^2", {{"a", 1.0}, {"L", 4.0}}},
      {"truncated_parabola_s", "(1 - x^2)_+^s", {{"s", 0.5}}},
  };
  std::sort(g.begin(), g.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return g;
}

SampledFunction make_generator(const std::string& name, const std::map<std::string, double>& params) {
  const auto all = list_generators();
  auto it = std::find_if(all.begin(), all.end(), [&](const auto& g) { return g.name == name; });
  if (it == all.end()) throw SchemaError("unknown generator '" + name + "'");
  std::map<std::string, double> p = it->defaults;
  for (const auto& [k, v] : params) {
    if (!p.count(k)) throw SchemaError("generator '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  if (name == "constant") {
    const double c = p["c"];
    return SampledFunction::closed_form(name, [c](double) { return c; }, 1.0,
                                        TailModel::constant(c), {}, 0.0);
  }
  if (name == "linear") {
    const double a = p["slope"], b = p["offset"], L = p["L"];
    // Tail metadata records the growth rate; evaluation stays exact.
    return SampledFunction::closed_form(name, [a, b](double x) { return a * x + b; }, L,
                                        TailModel::decay(std::abs(a), std::abs(a), -1.0), {},
                                        std::abs(a));
  }
  if (name == "abs") {
    const double c = p["center"], L = p["L"];
    return SampledFunction::closed_form(name, [c](double x) { return std::abs(x - c); }, L,
                                        TailModel::decay(1.0, 1.0, -1.0), {c}, 1.0);
  }
  if (name == "quadratic") {
    const double a = p["a"], L = p["L"];
    return SampledFunction::closed_form(name, [a](double x) { return a * x * x; }, L,
                                        TailModel::decay(std::abs(a), std::abs(a), -2.0), {},
                                        2.0 * std::abs(a) * L);
  }
  if (name == "bump") {
    const double c = p["center"], r = p["radius"], h = p["height"];
    if (!(r > 0.0)) throw SchemaError("bump radius must be positive");
    // max |d/dx| of the bump is 2.1703571 h / r, attained at |z| = 0.7598.
    return SampledFunction::closed_form(
        name, [c, r, h](double x) { return bump_value(x, c, r, h); }, std::abs(c) + r,
        TailModel::zero(), {c - r, c + r}, 2.1703572 * std::abs(h) / r);
  }
  // truncated_parabola_s
  const double s = p["s"];
  if (!(s > 0.0)) throw SchemaError("truncated_parabola_s requires s > 0");
  return SampledFunction::closed_form(
      name,
      [s](double x) {
        const double v = 1.0 - x * x;
        return v > 0.0 ? std::pow(v, s) : 0.0;
      },
      1.0, TailModel::zero(), {-1.0, 1.0}, std::nullopt);
}

// ---------------------------------------------------------------------------

void Domain1D::validate() const {
  if (!(a < b)) throw ValidationError("domain requires a < b");
  if (order < 1 || order > 128) throw ValidationError("quadrature order out of range");
  if (panels < 1) throw ValidationError("domain needs at least one panel");
  if (!(grading >= 1.0)) throw ValidationError("grading exponent must be >= 1");
}

std::vector<double> Domain1D::edges(std::span<const double> breakpoints) const {
  validate();
  std::vector<double> cuts{a, b};
  for (double s : singular_points)
    if (s > a && s < b) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  auto is_singular = [&](double x) {
    return std::find(singular_points.begin(), singular_points.end(), x) != singular_points.end();
  };
  std::vector<double> out{cuts.front()};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    const bool sl = is_singular(lo), sr = is_singular(hi);
    for (int j = 1; j <= panels; ++j) {
      const double u = static_cast<double>(j) / panels;
      double x;
      if (sl && sr) {
        // Grade toward both ends.
        const double v = u < 0.5 ? 0.5 * std::pow(2.0 * u, grading)
                                 : 1.0 - 0.5 * std::pow(2.0 * (1.0 - u), grading);
        x = lo + (hi - lo) * v;
      } else if (sl) {
        x = lo + (hi - lo) * std::pow(u, grading);
      } else if (sr) {
        x = hi - (hi - lo) * std::pow(1.0 - u, grading);
      } else {
        x = lo + (hi - lo) * u;
      }
      out.push_back(x);
    }
    out.back() = hi;
  }
  for (double p : breakpoints)
    if (p > a && p < b) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

quad::NodeSet Domain1D::rule(std::span<const double> breakpoints) const {
  return quad::composite_nodes(edges(breakpoints), order);
}

Domain1D Domain1D::refined() const {
  Domain1D d = *this;
  d.panels *= 2;
  return d;
}

}  // namespace ofrac
