#pragma once

#include <optional>
#include <vector>

#include "ofrac/sampled_function.hpp"
#include "ofrac/young.hpp"

namespace ofrac {

/// Quadrature controls for the principal-value operators.
///
/// The inner ball |y - x| < rho_split is covered by `inner_levels` dyadic
/// shells of `nodes_per_shell` Gauss points each, the annulus up to R_max by
/// adaptive Gauss-Kronrod, and |y - x| > R_max by a logarithmic tail rule.
/// rho_reg > 0 replaces |x - y|^s inside g by (|x - y| + rho_reg)^s.
struct QuadratureConfig {
  double rho_split = 0.1;
  double R_max = 1e3;
  int inner_levels = 30;
  int nodes_per_shell = 16;
  double rho_reg = 0.0;
  /// Relative tolerance for the refinement check (absolute below 1).
  double tolerance = 1e-6;
  /// Hoelder exponent of u at a critical point (C^2_beta data), if known.
  std::optional<double> beta;
  /// When false, refinement disagreements are reported in error_estimate
  /// instead of raising NotConverged.
  bool strict = true;

  void validate() const;
};

struct PVResult {
  double value = 0.0;
  double inner_part = 0.0;
  double outer_part = 0.0;
  double tail_part = 0.0;
  double error_estimate = 0.0;
};

/// P.V. integral of g(D_s u(x, y)) |x - y|^{-1-s} dy (prefactor 1).
PVResult eval_pv_glaplacian(const SampledFunction& u, double x, const YoungFunction& Y,
                            double s, const QuadratureConfig& cfg = {});

/// Integral of G(|D_s u(x, y)|) |x - y|^{-1} dy.
PVResult eval_g_gradient_parts(const SampledFunction& u, double x, const YoungFunction& Y,
                               double s, const QuadratureConfig& cfg = {});
double eval_g_gradient(const SampledFunction& u, double x, const YoungFunction& Y, double s,
                       const QuadratureConfig& cfg = {});

/// PV with the regularized quotient (u(x) - u(y)) / (|x - y| + rho_reg)^s.
double eval_pv_regularized(const SampledFunction& u, double x, const YoungFunction& Y,
                           double s, double rho_reg, QuadratureConfig cfg = {});

struct ProbeResult {
  std::vector<double> rhos;
  std::vector<double> magnitudes;
  double slope = 0.0;
  double target = 0.0;
  bool all_below_tolerance = false;
};

/// |P.V. integral over B_rho(x)| for each rho, with the fitted log-log slope
/// and the predicted exponent: (beta - s) p- - beta when beta is given,
/// (2 - s) p- - 2 otherwise.
ProbeResult inner_decay_probe(const SampledFunction& u, double x, const YoungFunction& Y,
                              double s, const std::vector<double>& rhos,
                              std::optional<double> beta = std::nullopt,
                              const QuadratureConfig& cfg = {});

/// Far-field bound for the PV: with theta = rho / (2 (1 + |x|)) and
/// M = theta^{-s} 2^{1-s}, the part of the integral over |y - x| >= rho is
/// bounded by M^{p+ - 1} theta^{-1-s} times the weighted integral of
/// g((|u(x)| + |u(y)|) / (1 + |y|^s)) / (1 + |y|^{1+s}) over the same set.
/// Requires rho < 1.
struct TailBound {
  double far_field = 0.0;  // |P.V. integral over |y - x| >= rho|
  double envelope = 0.0;
};
TailBound pv_tail_envelope(const SampledFunction& u, double x, const YoungFunction& Y,
                           double s, double rho, const QuadratureConfig& cfg = {});

/// Threshold 2 / (2 - s) separating the degenerate critical-point regime.
inline double critical_index(double s) { return 2.0 / (2.0 - s); }

}  // namespace ofrac
