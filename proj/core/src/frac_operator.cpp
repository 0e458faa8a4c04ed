#include "ofrac/frac_operator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "ofrac/errors.hpp"
#include "ofrac/quadrature.hpp"

namespace ofrac {
namespace {

using Radial = std::function<double(double)>;
// False once the data differences at radius r are lost in roundoff.
using Resolved = std::function<bool(double)>;

struct RadialParts {
  double inner = 0.0;
  double outer = 0.0;
  double tail = 0.0;
  double error = 0.0;  // quadrature error plus extrapolation doubt
  bool inner_decays = true;
  bool tail_converged = true;
};

struct RadialPlan {
  double rho = 0.1;
  double R = 1e3;
  int levels = 30;
  int nodes = 16;
  double rel_tol = 1e-8;
  std::vector<double> r_breaks;
  Resolved resolved;
};

// Integral over the dyadic shells of (0, rho), written in t = log r, with the
// geometric remainder of the last two shells standing in for (0, rho 2^-L).
// Descent stops at the first shell whose data are unresolved at both ends;
// what lies below is roundoff and is dropped. Each shell is the sum of the
// Gauss rule on its two halves; when that disagrees with the rule on the
// whole shell (a jump of g or g' inside), the shell is redone adaptively.
double inner_shells(const Radial& h, double rho, int levels, int nodes, bool* decays,
                    double* doubt, double rel_tol, const Resolved& resolved = {}) {
  const auto& rule = quad::gauss_legendre(nodes);
  quad::CompensatedSum sum;
  double prev = 0.0, last = 0.0;
  *decays = true;
  *doubt = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double r_hi = rho * std::ldexp(1.0, -k);
    if (resolved && !resolved(r_hi) && !resolved(0.5 * r_hi)) {
      *doubt = std::abs(last);
      return sum.value();
    }
    const double t_hi = std::log(rho) - k * std::log(2.0);
    const double t_lo = t_hi - std::log(2.0);
    auto in_t = [&h](double t) {
      const double r = std::exp(t);
      return h(r) * r;
    };
    auto gauss = [&](double a, double b) {
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      quad::CompensatedSum acc;
      for (int i = 0; i < nodes; ++i) acc.add(half * rule.weights[i] * in_t(mid + half * rule.nodes[i]));
      return acc.value();
    };
    const double t_mid = 0.5 * (t_lo + t_hi);
    const double whole = gauss(t_lo, t_hi);
    double shell = gauss(t_lo, t_mid) + gauss(t_mid, t_hi);
    if (std::abs(shell - whole) > rel_tol * std::max(std::abs(shell), std::abs(sum.value())))
      shell = quad::adaptive(in_t, t_lo, t_hi, rel_tol);
    prev = last;
    last = shell;
    sum.add(last);
  }
  double rem = 0.0;
  if (last != 0.0) {
    const double q = prev != 0.0 ? last / prev : std::numeric_limits<double>::infinity();
    if (q >= 0.0 && q < 1.0) {
      rem = last * q / (1.0 - q);
    } else {
      *decays = false;
      *doubt = std::abs(last) / std::max(1.0 - std::abs(q), 1e-3);
    }
  }
  return sum.value() + rem;
}

RadialParts radial_integral(const Radial& h, const RadialPlan& plan, bool with_inner = true) {
  RadialParts out;
  if (with_inner) {
    double doubt = 0.0;
    out.inner = inner_shells(h, plan.rho, plan.levels, plan.nodes, &out.inner_decays, &doubt,
                             plan.rel_tol, plan.resolved);
    out.error += doubt;
  }
  const auto edges = quad::panel_edges(plan.rho, plan.R, plan.r_breaks, 2.0);
  quad::CompensatedSum outer;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    double err = 0.0;
    outer.add(quad::adaptive(h, edges[k], edges[k + 1], plan.rel_tol, &err, 30));
    out.error += err;
  }
  out.outer = outer.value();
  const auto tail = quad::log_tail(h, plan.R, 1e-13, 700.0);
  out.tail = tail.value;
  out.tail_converged = tail.converged && std::isfinite(tail.value);
  out.error += std::abs(tail.remainder);
  return out;
}

void require_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ValidationError("s must lie in (0, 1)");
}

struct Geometry {
  double rho = 0.1;
  bool at_kink = false;
  std::vector<double> r_breaks;
};

Geometry locate(const SampledFunction& u, double x, const QuadratureConfig& cfg) {
  Geometry geo;
  const auto bps = u.breakpoints();
  const double L = u.core_half_width();
  const double kink_tol = 1e-12 * std::max(1.0, std::abs(x));
  double dmin = std::numeric_limits<double>::infinity();
  auto see = [&](double b, bool kink) {
    const double d = std::abs(b - x);
    if (d <= kink_tol) {
      geo.at_kink = geo.at_kink || kink;
      return;
    }
    dmin = std::min(dmin, d);
    geo.r_breaks.push_back(d);
  };
  for (double b : bps) see(b, true);
  // Core edges matter for grid data, where the tail model takes over.
  see(-L, u.is_grid());
  see(L, u.is_grid());
  geo.rho = std::min(cfg.rho_split, 0.5 * dmin);
  std::sort(geo.r_breaks.begin(), geo.r_breaks.end());
  return geo;
}

RadialPlan make_plan(const Geometry& geo, const QuadratureConfig& cfg, bool refined,
                     const Resolved& resolved) {
  RadialPlan plan;
  plan.resolved = resolved;
  plan.rho = geo.rho;
  plan.R = std::max(cfg.R_max, 2.0 * geo.rho);
  plan.levels = cfg.inner_levels + (refined ? 4 : 0);
  plan.nodes = refined ? std::min(2 * cfg.nodes_per_shell, 128) : cfg.nodes_per_shell;
  plan.rel_tol = refined ? 1e-11 : 1e-9;
  plan.r_breaks = geo.r_breaks;
  return plan;
}

double numerical_gradient(const SampledFunction& u, double x, double rho) {
  const double h = std::min(1e-6, 1e-3 * rho);
  return (u(x + h) - u(x - h)) / (2.0 * h);
}

// Definition of admissible test functions at critical points in the
// degenerate regime: u must be C^2_beta with beta > s p- / (p- - 1), which
// is checked on the inner shells.
void check_critical_point(const SampledFunction& u, double x, const YoungFunction& Y, double s,
                          double rho, const QuadratureConfig& cfg) {
  if (cfg.rho_reg > 0.0) return;
  const double pm = Y.p_minus();
  if (pm > critical_index(s)) return;
  if (std::abs(numerical_gradient(u, x, rho)) >= 1e-8) return;
  const double need = s * pm / (pm - 1.0);
  if (!cfg.beta)
    throw SingularityAtCriticalPoint("p- <= 2/(2-s) at a critical point; C^2_beta data required");
  const double beta = *cfg.beta;
  if (!(beta > need))
    throw SingularityAtCriticalPoint("beta = " + std::to_string(beta) +
                                     " must exceed s p-/(p- - 1) = " + std::to_string(need));
  const double ux = u(x);
  double first = 0.0, last = 0.0;
  for (int k = 0; k < cfg.inner_levels; ++k) {
    const double r = rho * std::ldexp(1.0, -k);
    const double m = std::max(std::abs(ux - u(x + r)), std::abs(ux - u(x - r))) / std::pow(r, beta);
    if (k < 4) first = std::max(first, m);
    last = m;
  }
  if (last > 10.0 * first + 1e-300 && last > 1e-12)
    throw SingularityAtCriticalPoint("|u(x) - u(y)| <= K |x - y|^beta fails on the inner shells");
}

// A difference is resolved when it exceeds 1e3 ulps of the values involved,
// i.e. it carries at least three correct digits.
bool above_roundoff(double diff, double scale) {
  return std::abs(diff) > 1e3 * std::numeric_limits<double>::epsilon() * scale;
}

// Paired integrands cancel to the symmetric second difference.
Resolved paired_resolution(const SampledFunction& u, double x) {
  const double ux = u(x);
  return [&u, x, ux](double r) {
    const double a = u(x + r), b = u(x - r);
    return above_roundoff(2.0 * ux - a - b, std::max({std::abs(ux), std::abs(a), std::abs(b)}));
  };
}

Resolved one_sided_resolution(const SampledFunction& u, double x) {
  const double ux = u(x);
  return [&u, x, ux](double r) {
    const double a = u(x + r), b = u(x - r);
    return above_roundoff(std::max(std::abs(ux - a), std::abs(ux - b)),
                          std::max({std::abs(ux), std::abs(a), std::abs(b)}));
  };
}

RadialParts evaluate(const Radial& h, const Geometry& geo, const QuadratureConfig& cfg,
                     const Resolved& resolved, double* error) {
  const auto coarse = radial_integral(h, make_plan(geo, cfg, false, resolved));
  const auto fine = radial_integral(h, make_plan(geo, cfg, true, resolved));
  const double vc = coarse.inner + coarse.outer + coarse.tail;
  const double vf = fine.inner + fine.outer + fine.tail;
  *error = std::abs(vf - vc) + fine.error;
  if (!fine.tail_converged)
    throw TailDivergence("far-field integral does not settle beyond R_max");
  if (cfg.strict && !geo.at_kink && fine.inner_decays &&
      std::abs(vf - vc) > cfg.tolerance * std::max(1.0, std::abs(vf)))
    throw NotConverged("refinement changed the value by " + std::to_string(std::abs(vf - vc)));
  return fine;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rho_split > 0.0)) throw ValidationError("rho_split must be positive");
  if (!(rho_split < R_max)) throw ValidationError("rho_split must be below R_max");
  if (inner_levels < 4) throw ValidationError("inner_levels must be >= 4");
  if (nodes_per_shell < 1 || nodes_per_shell > 128)
    throw ValidationError("nodes_per_shell must lie in [1, 128]");
  if (!(rho_reg >= 0.0)) throw ValidationError("rho_reg must be nonnegative");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
}

PVResult eval_pv_glaplacian(const SampledFunction& u, double x, const YoungFunction& Y, double s,
                            const QuadratureConfig& cfg) {
  require_s(s);
  cfg.validate();
  const auto geo = locate(u, x, cfg);
  check_critical_point(u, x, Y, s, geo.rho, cfg);
  const double ux = u(x);
  const double reg = cfg.rho_reg;
  Radial h = [&](double r) {
    const double den = std::pow(r + reg, s);
    const double a = (ux - u(x + r)) / den;
    const double b = (ux - u(x - r)) / den;
    return (Y.g(a) + Y.g(b)) * std::pow(r, -1.0 - s);
  };
  PVResult out;
  const auto parts = evaluate(h, geo, cfg, paired_resolution(u, x), &out.error_estimate);
  out.inner_part = parts.inner;
  out.outer_part = parts.outer;
  out.tail_part = parts.tail;
  out.value = out.inner_part + out.outer_part + out.tail_part;
  if (!std::isfinite(out.value)) throw NonFinite("principal value is not finite");
  return out;
}

PVResult eval_g_gradient_parts(const SampledFunction& u, double x, const YoungFunction& Y,
                               double s, const QuadratureConfig& cfg) {
  require_s(s);
  cfg.validate();
  const auto geo = locate(u, x, cfg);
  const double ux = u(x);
  Radial h = [&](double r) {
    const double rs = std::pow(r, s);
    return (Y.G((ux - u(x + r)) / rs) + Y.G((ux - u(x - r)) / rs)) / r;
  };
  PVResult out;
  const auto parts = evaluate(h, geo, cfg, one_sided_resolution(u, x), &out.error_estimate);
  out.inner_part = parts.inner;
  out.outer_part = parts.outer;
  out.tail_part = parts.tail;
  out.value = out.inner_part + out.outer_part + out.tail_part;
  if (!std::isfinite(out.value)) throw NonFinite("g-gradient is not finite");
  return out;
}

double eval_g_gradient(const SampledFunction& u, double x, const YoungFunction& Y, double s,
                       const QuadratureConfig& cfg) {
  return eval_g_gradient_parts(u, x, Y, s, cfg).value;
}

double eval_pv_regularized(const SampledFunction& u, double x, const YoungFunction& Y, double s,
                           double rho_reg, QuadratureConfig cfg) {
  if (!(rho_reg > 0.0)) throw ValidationError("rho_reg must be positive");
  cfg.rho_reg = rho_reg;
  return eval_pv_glaplacian(u, x, Y, s, cfg).value;
}

ProbeResult inner_decay_probe(const SampledFunction& u, double x, const YoungFunction& Y, double s,
                              const std::vector<double>& rhos, std::optional<double> beta,
                              const QuadratureConfig& cfg) {
  require_s(s);
  cfg.validate();
  if (rhos.size() < 2) throw InsufficientDecades("need at least two radii");
  const auto [lo, hi] = std::minmax_element(rhos.begin(), rhos.end());
  if (!(*lo > 0.0)) throw ValidationError("radii must be positive");
  if (std::log10(*hi / *lo) < 2.0 - 1e-9)
    throw InsufficientDecades("radii span " + std::to_string(std::log10(*hi / *lo)) +
                              " decades; at least 2 required");
  const double pm = Y.p_minus();
  ProbeResult out;
  out.rhos = rhos;
  out.target = beta ? (*beta - s) * pm - *beta : (2.0 - s) * pm - 2.0;
  const double ux = u(x);
  Radial h = [&](double r) {
    const double rs = std::pow(r, s);
    return (Y.g((ux - u(x + r)) / rs) + Y.g((ux - u(x - r)) / rs)) * std::pow(r, -1.0 - s);
  };
  constexpr double kAbsTol = 1e-12;
  std::vector<double> lx, ly;
  for (double rho : rhos) {
    bool decays = true;
    double doubt = 0.0;
    const double m = std::abs(inner_shells(h, rho, cfg.inner_levels, cfg.nodes_per_shell,
                                           &decays, &doubt, 1e-10, paired_resolution(u, x)));
    out.magnitudes.push_back(m);
    if (m > kAbsTol) {
      lx.push_back(std::log(rho));
      ly.push_back(std::log(m));
    }
  }
  out.all_below_tolerance = lx.empty();
  if (lx.size() < 2) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

TailBound pv_tail_envelope(const SampledFunction& u, double x, const YoungFunction& Y, double s,
                           double rho, const QuadratureConfig& cfg) {
  require_s(s);
  cfg.validate();
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("tail envelope needs 0 < rho < 1");
  auto geo = locate(u, x, cfg);
  geo.r_breaks.erase(std::remove_if(geo.r_breaks.begin(), geo.r_breaks.end(),
                                    [&](double r) { return r <= rho; }),
                     geo.r_breaks.end());
  RadialPlan plan;
  plan.rho = rho;
  plan.R = std::max(cfg.R_max, 2.0 * rho);
  plan.rel_tol = 1e-10;
  plan.r_breaks = geo.r_breaks;

  const double ux = u(x);
  Radial h = [&](double r) {
    const double rs = std::pow(r, s);
    return (Y.g((ux - u(x + r)) / rs) + Y.g((ux - u(x - r)) / rs)) * std::pow(r, -1.0 - s);
  };
  Radial e = [&](double r) {
    auto w = [&](double y) {
      const double ay = std::abs(y);
      return Y.g((std::abs(ux) + std::abs(u(y))) / (1.0 + std::pow(ay, s))) /
             (1.0 + std::pow(ay, 1.0 + s));
    };
    return w(x + r) + w(x - r);
  };
  const auto far = radial_integral(h, plan, false);
  const auto env = radial_integral(e, plan, false);
  if (!env.tail_converged) throw TailDivergence("tail envelope integral diverges");
  const double theta = rho / (2.0 * (1.0 + std::abs(x)));
  const double M = std::pow(theta, -s) * std::pow(2.0, 1.0 - s);
  TailBound out;
  out.far_field = std::abs(far.outer + far.tail);
  out.envelope = std::pow(M, Y.p_plus() - 1.0) * std::pow(theta, -1.0 - s) * (env.outer + env.tail);
  return out;
}

}  // namespace ofrac
