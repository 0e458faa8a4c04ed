#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofrac/quadrature.hpp"

namespace ofrac {

/// Behaviour of a function beyond its core [-L, L]:
/// Zero, Constant(c), or Decay(c, alpha) meaning u(y) = c |y|^{-alpha}.
/// A negative alpha models polynomial growth. `c_left` applies for y < -L.
struct TailModel {
  enum class Kind { Zero, Constant, Decay };
  Kind kind = Kind::Zero;
  double c = 0.0;
  double c_left = 0.0;
  double alpha = 0.0;

  static TailModel zero() { return {}; }
  static TailModel constant(double c) { return {Kind::Constant, c, c, 0.0}; }
  static TailModel constant(double c_right, double c_left) {
    return {Kind::Constant, c_right, c_left, 0.0};
  }
  static TailModel decay(double c, double alpha) { return {Kind::Decay, c, c, alpha}; }
  static TailModel decay(double c_right, double c_left, double alpha) {
    return {Kind::Decay, c_right, c_left, alpha};
  }

  double value(double y) const;
  /// Coefficient for the side containing y.
  double coefficient(double y) const { return y < 0.0 ? c_left : c; }
};

const char* to_string(TailModel::Kind kind) noexcept;

/// A real function on the line, given either by a closed-form generator or
/// by values on a uniform grid over [-L, L] with piecewise-linear
/// interpolation and an explicit tail model outside.
///
/// Closed-form functions are evaluated by their generator everywhere; their
/// tail model only feeds the analytic tail integrals. `breakpoints` lists the
/// points where the function is not smooth (grid nodes, support edges) so
/// quadrature panels can be aligned with them.
class SampledFunction {
 public:
  static SampledFunction closed_form(std::string name, std::function<double(double)> f,
                                     double core_half_width, TailModel tail,
                                     std::vector<double> breakpoints = {},
                                     std::optional<double> lipschitz_hint = std::nullopt);

  static SampledFunction grid(double L, std::vector<double> values, TailModel tail,
                              std::optional<double> lipschitz_hint = std::nullopt);

  /// Grid function sampled from f on n uniform nodes over [-L, L].
  static SampledFunction sample(const std::function<double(double)>& f, double L,
                                std::size_t n, TailModel tail,
                                std::optional<double> lipschitz_hint = std::nullopt);

  double operator()(double x) const;

  bool is_grid() const noexcept { return !values_.empty(); }
  const std::string& name() const noexcept { return name_; }
  double core_half_width() const noexcept { return L_; }
  const TailModel& tail() const noexcept { return tail_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::optional<double> lipschitz_hint() const noexcept { return lipschitz_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double> nodes() const;
  double spacing() const;

  /// Pointwise product with a constant (keeps grid/closed-form nature).
  SampledFunction scaled(double factor) const;
  /// u(x - shift).
  SampledFunction shifted(double shift) const;

  /// sup |u| over the core and the bounded part of the tail (infinity if the
  /// tail grows).
  double sup_abs() const;
  /// max u - min u over the same set.
  double oscillation() const;

 private:
  std::string name_;
  std::function<double(double)> f_;
  std::vector<double> values_;
  double L_ = 1.0;
  TailModel tail_;
  std::vector<double> breakpoints_;
  std::optional<double> lipschitz_;
};

/// Parameter schema entry for a registered closed-form generator.
struct GeneratorInfo {
  std::string name;
  std::string description;
  std::map<std::string, double> defaults;
};

/// Registry of named closed-form generators.
std::vector<GeneratorInfo> list_generators();

/// Builds a registered generator; unknown parameter names or generator names
/// raise SchemaError.
SampledFunction make_generator(const std::string& name,
                               const std::map<std::string, double>& params = {});

/// Smooth bump h exp(1 - 1/(1 - z^2)), z = (x - center)/radius, zero outside.
double bump_value(double x, double center, double radius, double height = 1.0);

/// An interval [a, b] with a composite Gauss rule whose panels are graded
/// toward `singular_points` with the given exponent.
struct Domain1D {
  double a = 0.0;
  double b = 1.0;
  int order = 8;
  int panels = 16;
  double grading = 1.0;
  std::vector<double> singular_points;

  void validate() const;
  double length() const noexcept { return b - a; }

  /// Panel edges, additionally split at every breakpoint inside (a, b).
  std::vector<double> edges(std::span<const double> breakpoints = {}) const;
  quad::NodeSet rule(std::span<const double> breakpoints = {}) const;
  Domain1D refined() const;
};

}  // namespace ofrac
