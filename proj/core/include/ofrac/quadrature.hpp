#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace ofrac::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with n points, 1 <= n <= 128.
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point Gauss-Legendre rule.
double gauss(const std::function<double(double)>& f, double a, double b, int n);

/// Composite Gauss rule over the panels delimited by `edges` (sorted).
double composite(const std::function<double(double)>& f,
                 std::span<const double> edges, int n);

/// Adaptive Gauss-Kronrod (15 point) on [a, b]; `error` receives the
/// estimated absolute error when non-null.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, double* error = nullptr, int max_depth = 18);

/// Panel edges on [a, b] that include every breakpoint strictly inside and
/// split any panel whose endpoint ratio exceeds `max_ratio` geometrically
/// (only when a > 0).
std::vector<double> panel_edges(double a, double b,
                                std::span<const double> breakpoints,
                                double max_ratio = 2.0);

/// Integral of f over [a, inf) using x = a * exp(w); stops once a unit panel
/// in w contributes less than rel_tol of the running total, then adds the
/// geometric remainder of the last two panels. Requires a > 0.
struct TailIntegral {
  double value = 0.0;
  double remainder = 0.0;
  bool converged = false;
};
TailIntegral log_tail(const std::function<double(double)>& f, double a,
                      double rel_tol = 1e-13, double max_w = 300.0,
                      int n = 16);

/// Nodes and weights of a composite rule, materialized.
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};
NodeSet composite_nodes(std::span<const double> edges, int n);

/// Sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace ofrac::quad
