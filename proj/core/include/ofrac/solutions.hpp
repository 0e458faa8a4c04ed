#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ofrac/check_report.hpp"
#include "ofrac/frac_operator.hpp"
#include "ofrac/sampled_function.hpp"
#include "ofrac/young.hpp"

namespace ofrac {

/// Right-hand side f(x, r, eta) with the growth envelope
/// |f| <= gamma(|r|) G~^{-1}(|eta|) + phi_sup.
struct SourceFunction {
  std::function<double(double, double, double)> f;
  std::function<double(double)> gamma = [](double) { return 0.0; };
  double phi_sup = 0.0;
  double lipschitz_eta = 0.0;
  /// f nonincreasing in r.
  bool monotone_r = false;
  /// False when f ignores eta, which spares the g-gradient evaluations.
  bool depends_on_eta = true;
  std::string label = "f";

  double operator()(double x, double r, double eta) const { return f(x, r, eta); }

  static SourceFunction constant(double c);
  /// f(x, r) = a(x) - lambda r, lambda >= 0 (monotone in r). The growth
  /// envelope holds for |r| <= r_cap, with phi_sup = a_sup + lambda r_cap.
  static SourceFunction linear_in_r(std::function<double(double)> a, double lambda,
                                    double a_sup, std::string label = "a(x) - lambda r",
                                    double r_cap = 1.0);
};

/// Sampled growth and monotonicity checks over x in [a, b], |r| <= r_max and
/// log-spaced eta.
std::vector<CheckReport> validate_source(const SourceFunction& f, const YoungFunction& Y,
                                         double a, double b, double r_max);

/// max of gamma on [0, sup_u].
double gamma_infinity(const SourceFunction& f, double sup_u);

/// f_eps(x, t, eta) = inf of f(y, t, eta) over y in B(x, r_eps), sampled on
/// 201 points; `clamp` restricts the ball to a domain.
SourceFunction f_epsilon(const SourceFunction& f, double r_eps,
                         std::optional<std::pair<double, double>> clamp = std::nullopt);

/// Smooth nonnegative bump supported on [center - radius, center + radius].
struct TestFunction {
  double center = 0.0;
  double radius = 1.0;
  double height = 1.0;

  double operator()(double x) const { return bump_value(x, center, radius, height); }
  double lo() const { return center - radius; }
  double hi() const { return center + radius; }
  SampledFunction as_sampled() const;
};

/// 8 centers x 3 radii with supports inside (a, b).
std::vector<TestFunction> bump_basis(double a, double b);

struct WeakPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_support = 0.0;   // K x K part
  double lhs_exterior = 0.0;  // K x (R \ K) and its mirror
};

/// lhs = 1/2 double integral of g(D_s u) D_s psi dmu, split over K x K and
/// the exterior strips; rhs = integral of f(x, u, D_g^s u) psi over K. With the
/// 1/2, lhs equals the integral of psi (-Delta_g)^s u for smooth u.
WeakPair weak_form_pair(const SampledFunction& u, const TestFunction& psi, const YoungFunction& Y,
                        double s, const SourceFunction& f, const QuadratureConfig& cfg = {});

/// Paraboloid u(x0) + a (x - x0) - c/2 (x - x0)^2 on B(x0, r); u elsewhere.
struct Touch {
  double gradient = 0.0;
  double curvature = 0.0;
  double radius = 0.1;
};

/// Viscosity supersolution test at x0: verifies that the paraboloid touches
/// u from below on a grid 10x finer than the data (TouchViolation
/// otherwise), then compares (-Delta_g)^s psi(x0) with
/// f(x0, psi(x0), D_g^s psi(x0)). achieved_constant holds the margin.
CheckReport viscosity_point_check(const SampledFunction& u, double x0, const Touch& touch,
                                  const YoungFunction& Y, double s, const SourceFunction& f,
                                  const QuadratureConfig& cfg = {}, double tolerance = 1e-3);

/// Touch data for a piecewise-linear u at x0: the local slope and the
/// smallest curvature (times 1.5) keeping the paraboloid below u in B(x0, r).
Touch touch_from_below(const SampledFunction& u, double x0, double radius);

/// Ratio of int_K G(xi) D_g^s u to
/// G(osc u) (int_K D_g^s xi + gamma_inf) + osc u.
CheckReport caccioppoli_report(const SampledFunction& u, const TestFunction& xi,
                               const YoungFunction& Y, double s, const SourceFunction& f,
                               const QuadratureConfig& cfg = {});

struct DirichletOptions {
  int nodes = 201;
  double damping = 0.5;
  double tolerance = 1e-11;
  int max_sweeps = 200000;
  /// Warm start: a few sweeps, then line-searched Newton on the same
  /// discrete system, before the Gauss-Seidel sweeps that decide
  /// convergence.
  bool newton_warm_start = true;
};

/// Discrete Dirichlet problem on (a, b): nodal monotone scheme, damped
/// nonlinear Gauss-Seidel with a safeguarded Newton solve per node.
class DirichletSolver {
 public:
  DirichletSolver(double a, double b, SampledFunction exterior, YoungFunction Y, double s,
                  SourceFunction f, DirichletOptions options = {});

  /// One damped sweep in increasing node order; returns max |update|.
  double sweep();
  /// Sweeps until max |update| < tolerance (MaxIterations otherwise).
  int solve();

  /// Discrete residual at interior node i for the current iterate.
  double residual(std::size_t i) const;
  double max_residual() const;

  const std::vector<double>& nodes() const noexcept { return x_; }
  const std::vector<double>& values() const noexcept { return u_; }
  void set_values(std::vector<double> v);
  std::size_t size() const noexcept { return x_.size(); }
  int sweeps_done() const noexcept { return sweeps_; }

  /// Nodal values inside [a, b], exterior data outside.
  SampledFunction solution() const;

 private:
  double operator_at(std::size_t i, double v, double* derivative) const;
  double gradient_at(std::size_t i) const;
  double solve_node(std::size_t i) const;
  double source_at(std::size_t i, double v) const;
  /// Returns false when no Newton step reduced the residual.
  bool newton_step();

  double a_, b_, h_, s_;
  SampledFunction ext_;
  YoungFunction Y_;
  SourceFunction f_;
  DirichletOptions opt_;
  std::vector<double> x_, u_;
  std::vector<double> far_w_;    // far_w_[m]: weight of a full hat at offset m
  std::vector<double> edge_w_;   // edge_w_[m]: boundary half hat at offset m
  std::vector<double> dist_s_;   // (m h)^{-s}
  // Near-field rule in t = -log(r / h): argument scale, weight with the
  // kernel r^{-s}, and the bare dt weight.
  std::vector<double> near_c_, near_w_, near_dt_;
  // Exterior quadrature per interior node: data values, d^{-s}, weights d^{-1-s}.
  std::vector<std::vector<double>> ext_val_, ext_ds_, ext_w_;
  int sweeps_ = 0;
};

SampledFunction solve_dirichlet(double a, double b, const SampledFunction& exterior,
                                const YoungFunction& Y, double s, const SourceFunction& f,
                                DirichletOptions options = {});

/// Passes when lower <= upper + tol at every node.
CheckReport comparison_report(const std::vector<double>& lower, const std::vector<double>& upper,
                              double tol = 1e-8);

}  // namespace ofrac
