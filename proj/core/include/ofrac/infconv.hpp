#pragma once

#include <optional>
#include <vector>

#include "ofrac/check_report.hpp"
#include "ofrac/sampled_function.hpp"

namespace ofrac {

/// Exponent of the penalty |x - y|^q / (q eps^{q-1}): 2 when
/// p- > 2/(2 - s), otherwise s p- / (p- - 1) + 1.
double choose_q(double p_minus, double s);

struct InfConvParams {
  double epsilon = 0.1;
  double q = 2.0;
  double window_radius = 1.0;
  /// Lipschitz constant of u when known; u_eps inherits it.
  std::optional<double> lipschitz;
};

/// Parameters with window radius (q eps^{q-1} osc u)^{1/q} for bounded u,
/// (q eps^{q-1} Lip u)^{1/(q-1)} for Lipschitz u, the smaller when both apply.
InfConvParams make_infconv_params(const SampledFunction& u, double epsilon, double q);

struct InfConvResult {
  InfConvParams params;
  std::vector<double> x;
  std::vector<double> values;
  /// Minimizers of y -> u(y) + |x - y|^q / (q eps^{q-1}) per node, within
  /// 1e-10 of the minimum.
  std::vector<std::vector<double>> argmin;
  double semiconcavity_bound = 0.0;
  /// Set when some window left the core [-L, L] so tail values were used.
  bool window_clipped = false;
};

/// Nodes default to the grid of u (grid input) or 2001 uniform points on
/// [-L, L] (closed form). Candidates are x + k h inside the window, refined
/// by golden-section search between neighbours.
InfConvResult inf_convolve(const SampledFunction& u, const InfConvParams& params,
                           std::vector<double> nodes = {});

/// Bound 2C on second differences, C = q (q - 1) r^{q-2} / (q eps^{q-1}).
double semiconcavity_constant(const InfConvParams& params);

/// Checks monotone convergence in epsilon, semiconcavity, stationary points,
/// minimizer windows and the Lipschitz bound for a decreasing list of
/// epsilons. Reports carry the epsilon-indexed worst sample.
std::vector<CheckReport> propinfconv_report(const SampledFunction& u,
                                            const std::vector<double>& epsilons, double q,
                                            std::vector<double> nodes = {});

}  // namespace ofrac
