#pragma once

#include <vector>

#include "ofrac/sampled_function.hpp"
#include "ofrac/young.hpp"

namespace ofrac {

struct ModularResult {
  double value = 0.0;
  double error = 0.0;
};

/// Integral of G(|u|) over the domain by composite Gauss quadrature; the
/// error is the difference against a rule with twice as many panels.
ModularResult modular_G(const SampledFunction& u, const Domain1D& dom,
                        const YoungFunction& Y);

/// Double integral of G(|u(x) - u(y)| / |x - y|^s) / |x - y| over dom x dom.
///
/// Computed in the variables (x, r = y - x): dyadic shells in r toward the
/// diagonal, with x panels split at the function's breakpoints b and b - r.
/// Shell contributions must decay toward the diagonal; the last decay ratio
/// extrapolates the remaining strip geometrically.
ModularResult modular_sG(const SampledFunction& u, const Domain1D& dom,
                         const YoungFunction& Y, double s);

enum class NormKind { LG, SeminormSG };

/// Precomputed quadrature for lambda -> modular(u / lambda); each evaluation
/// is a weighted sum of G over fixed arguments.
class ModularSampler {
 public:
  ModularSampler(const SampledFunction& u, const Domain1D& dom,
                 const YoungFunction& Y, NormKind kind, double s = 0.5);

  double operator()(double lambda) const;
  bool is_zero() const noexcept { return args_.empty(); }

 private:
  YoungFunction Y_;
  std::vector<double> args_;
  std::vector<double> weights_;
};

struct NormResult {
  double lambda = 0.0;
  double modular_at_lambda = 0.0;  // Phi(u / lambda)
  double modular = 0.0;            // Phi(u)
};

/// Luxemburg norm inf{lambda > 0 : Phi(u / lambda) <= 1} by bisection in
/// log lambda. Zero input returns lambda = 0.
NormResult luxemburg_norm(const SampledFunction& u, const Domain1D& dom,
                          const YoungFunction& Y, NormKind kind, double s = 0.5);

/// min / max of t^{p-}, t^{p+}.
double xi_minus(const YoungFunction& Y, double t);
double xi_plus(const YoungFunction& Y, double t);

struct LgResult {
  double value = 0.0;
  double core = 0.0;
  double tail = 0.0;
  /// Exponent of |y| in the growth of |u(y)| / (1 + |y|^s) at infinity.
  double argument_exponent = 0.0;
};

/// Weighted integral of g(|u(x)| / (1 + |x|^s)) / (1 + |x|^{n+s}) over the
/// line. The core [-L, L] is integrated by quadrature, the tail from the tail
/// model. The exponent count using p-, p+ decides convergence; an
/// inconclusive count falls back to the numerical tail, and TailDivergence is
/// raised when that does not settle.
LgResult lg_membership(const SampledFunction& u, const YoungFunction& Y, double s,
                       int n = 1);

}  // namespace ofrac
