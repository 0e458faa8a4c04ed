#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ofrac/check_report.hpp"

namespace ofrac {

enum class YoungFamily { Power, PowerLog, PiecewisePower, UserDefined };

const char* to_string(YoungFamily family) noexcept;

/// Parameters accepted by make_young.
///
/// Power(p):              G(t) = t^p.
/// PowerLog(p):           G(t) = t^p (|log t| + 1), p > (3 + sqrt 5)/2.
/// PiecewisePower(p,q,b): g(t) = p t^(p-1) below b and continues as a
///                        multiple of t^(q-1) above b, so g stays continuous.
/// UserDefined:           g supplied as a callable; G is integrated and g' is
///                        taken by central differences.
struct YoungSpec {
  YoungFamily family = YoungFamily::Power;
  double p = 2.0;
  double q = 2.0;
  double breakpoint = 1.0;
  std::function<double(double)> user_g;
  std::string label;
  std::optional<double> p_minus;
  std::optional<double> p_plus;

  static YoungSpec power(double p);
  static YoungSpec power_log(double p);
  static YoungSpec piecewise_power(double p, double q, double breakpoint = 1.0);
  static YoungSpec user_defined(std::function<double(double)> g,
                                std::string label = "user");
};

/// Log-spaced sample grid [lo, hi] with a fixed number of points per decade.
struct SampleGrid {
  double lo = 1e-6;
  double hi = 1e6;
  int per_decade = 64;

  std::vector<double> points() const;
};

/// An evaluable Young function (G, g, g') with growth indices p-, p+.
///
/// G is normalized so that G(1) = 1 by rescaling the argument. g is extended
/// to the whole line as an odd function, G as an even one. Immutable and
/// cheap to copy.
class YoungFunction {
 public:
  double G(double t) const;
  double g(double t) const;
  double dg(double t) const;

  double p_minus() const noexcept { return p_minus_; }
  double p_plus() const noexcept { return p_plus_; }
  YoungFamily family() const noexcept { return spec_.family; }
  const YoungSpec& spec() const noexcept { return spec_; }
  double argument_scale() const noexcept { return scale_; }
  std::string describe() const;

  friend YoungFunction make_young(const YoungSpec& spec, SampleGrid grid);

 private:
  struct UserTable;

  double raw_G(double t) const;
  double raw_g(double t) const;
  double raw_dg(double t) const;

  YoungSpec spec_;
  double scale_ = 1.0;
  double p_minus_ = 2.0;
  double p_plus_ = 2.0;
  std::shared_ptr<const UserTable> table_;
};

/// Builds and validates a Young function; throws ValidationError naming the
/// offending sample when an invariant fails on the grid.
YoungFunction make_young(const YoungSpec& spec, SampleGrid grid = {});

/// Sup{a t - G(t)} together with its maximizer.
struct ComplementaryValue {
  double a = 0.0;
  double t_star = 0.0;
  double value = 0.0;
};

ComplementaryValue complementary(const YoungFunction& Y, double a);

/// Inverse of a -> complementary(Y, a).value.
double complementary_inverse(const YoungFunction& Y, double v);

/// Runs the sampled inequality catalogue for Y. Explicit-constant checks use
/// the constants implied by the growth indices; free-constant checks are
/// fitted on every other grid point, inflated by 5%, then verified on the
/// full grid.
std::vector<CheckReport> inequality_suite(const YoungFunction& Y,
                                          SampleGrid grid = {});

/// Optional check that t g'(t)/g(t) is nondecreasing on the grid, a
/// sufficient condition for the complementary function to satisfy the
/// Delta' condition.
CheckReport index_monotonicity_report(const YoungFunction& Y,
                                      SampleGrid grid = {});

}  // namespace ofrac
