#include "ofrac/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ofrac/errors.hpp"
#include "ofrac/parallel.hpp"

namespace ofrac {
namespace {

constexpr int kShellNodes = 8;
// Shells stop at r = kMinShell * |dom|; differences below that lose digits.
constexpr double kMinShell = 1e-13;
constexpr int kMinShells = 8;

void require_finite(double v, const char* what, double x) {
  if (!std::isfinite(v))
    throw NonFinite(std::string(what) + " is not finite at x = " + std::to_string(x));
}

void require_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ValidationError("s must lie in (0, 1)");
}

// Quadrature nodes for the (x, r) parametrization, grouped by dyadic shell.
struct ShellNodes {
  std::vector<double> args;
  std::vector<double> weights;
  std::vector<std::size_t> offsets{0};
};

void add_shell(ShellNodes& out, const SampledFunction& u, const Domain1D& dom, double s,
               double r_lo, double r_hi) {
  const auto& rule = quad::gauss_legendre(kShellNodes);
  const double t_lo = std::log(r_lo), t_hi = std::log(r_hi);
  const double half = 0.5 * (t_hi - t_lo), mid = 0.5 * (t_hi + t_lo);
  const auto bps = u.breakpoints();
  const auto base_edges = dom.edges();
  for (int k = 0; k < kShellNodes; ++k) {
    const double r = std::exp(mid + half * rule.nodes[k]);
    const double wr = half * rule.weights[k];  // dr / r = dt
    const double x_hi = dom.b - r;
    if (x_hi <= dom.a) continue;
    std::vector<double> edges;
    for (double e : base_edges)
      if (e < x_hi) edges.push_back(e);
    edges.push_back(x_hi);
    for (double b : bps) {
      if (b > dom.a && b < x_hi) edges.push_back(b);
      if (b - r > dom.a && b - r < x_hi) edges.push_back(b - r);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const auto nodes = quad::composite_nodes(edges, dom.order);
    const double rs = std::pow(r, s);
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      const double x = nodes.x[i];
      const double d = u(x + r) - u(x);
      require_finite(d, "u", x);
      out.args.push_back(std::abs(d) / rs);
      // Factor 2 accounts for the mirrored half r < 0.
      out.weights.push_back(2.0 * wr * nodes.w[i]);
    }
  }
  out.offsets.push_back(out.args.size());
}

double shell_sum(const ShellNodes& nodes, std::size_t shell, const YoungFunction& Y,
                 double inv_lambda) {
  quad::CompensatedSum sum;
  for (std::size_t i = nodes.offsets[shell]; i < nodes.offsets[shell + 1]; ++i) {
    const double v = nodes.weights[i] * Y.G(nodes.args[i] * inv_lambda);
    require_finite(v, "G(|D_s u|)", nodes.args[i]);
    sum.add(v);
  }
  return sum.value();
}

struct ShellPlan {
  ShellNodes nodes;
  std::vector<double> contributions;
  double ratio = 0.0;  // decay ratio of the last two shells
};

ShellPlan plan_shells(const SampledFunction& u, const Domain1D& dom, const YoungFunction& Y,
                      double s) {
  dom.validate();
  require_s(s);
  ShellPlan plan;
  const double len = dom.length();
  double total = 0.0;
  int non_decaying = 0;
  for (int k = 0;; ++k) {
    const double r_hi = len * std::ldexp(1.0, -k), r_lo = 0.5 * r_hi;
    add_shell(plan.nodes, u, dom, s, r_lo, r_hi);
    const double c = shell_sum(plan.nodes, static_cast<std::size_t>(k), Y, 1.0);
    plan.contributions.push_back(c);
    total += c;
    if (k >= 1) {
      const double prev = plan.contributions[k - 1];
      plan.ratio = prev > 0.0 ? c / prev : 0.0;
      non_decaying = (prev > 0.0 && plan.ratio >= 1.0) ? non_decaying + 1 : 0;
    }
    if (non_decaying >= 3 && k >= kMinShells)
      throw DiagonalDivergence(
          "shell contributions do not decay toward the diagonal (input not Lipschitz?)");
    if (k + 1 >= kMinShells && c <= 1e-16 * total) break;
    if (r_lo <= kMinShell * len) break;
  }
  if (!(plan.ratio < 1.0)) plan.ratio = 0.0;
  return plan;
}

double plan_value(const ShellPlan& plan, const YoungFunction& Y, double inv_lambda,
                  double* remainder = nullptr) {
  const std::size_t shells = plan.contributions.size();
  const auto parts = parallel_map(
      shells, [&](std::size_t k) { return shell_sum(plan.nodes, k, Y, inv_lambda); });
  quad::CompensatedSum sum;
  for (double v : parts) sum.add(v);
  const double rem = parts.back() * plan.ratio / (1.0 - plan.ratio);
  if (remainder) *remainder = rem;
  return sum.value() + rem;
}

double modular_G_value(const SampledFunction& u, const Domain1D& dom, const YoungFunction& Y) {
  const auto nodes = dom.rule(u.breakpoints());
  quad::CompensatedSum sum;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double v = u(nodes.x[i]);
    require_finite(v, "u", nodes.x[i]);
    const double G = Y.G(v);
    require_finite(G, "G(|u|)", nodes.x[i]);
    sum.add(nodes.w[i] * G);
  }
  return sum.value();
}

}  // namespace

ModularResult modular_G(const SampledFunction& u, const Domain1D& dom, const YoungFunction& Y) {
  dom.validate();
  const double v = modular_G_value(u, dom, Y);
  const double fine = modular_G_value(u, dom.refined(), Y);
  return {fine, std::abs(fine - v)};
}

ModularResult modular_sG(const SampledFunction& u, const Domain1D& dom, const YoungFunction& Y,
                         double s) {
  double rem = 0.0;
  const auto coarse = plan_shells(u, dom, Y, s);
  const double v = plan_value(coarse, Y, 1.0, &rem);
  const auto fine_plan = plan_shells(u, dom.refined(), Y, s);
  double rem_fine = 0.0;
  const double fine = plan_value(fine_plan, Y, 1.0, &rem_fine);
  return {fine, std::abs(fine - v) + std::abs(rem_fine)};
}

// ---------------------------------------------------------------------------

ModularSampler::ModularSampler(const SampledFunction& u, const Domain1D& dom,
                               const YoungFunction& Y, NormKind kind, double s)
    : Y_(Y) {
  dom.validate();
  if (kind == NormKind::LG) {
    const auto nodes = dom.rule(u.breakpoints());
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      const double v = std::abs(u(nodes.x[i]));
      require_finite(v, "u", nodes.x[i]);
      if (v > 0.0) {
        args_.push_back(v);
        weights_.push_back(nodes.w[i]);
      }
    }
    return;
  }
  const auto plan = plan_shells(u, dom, Y, s);
  // The geometric strip remainder is folded into the weights of the last
  // shell, which keeps the sampler a plain weighted sum.
  const std::size_t last = plan.contributions.size() - 1;
  const double boost = 1.0 + plan.ratio / (1.0 - plan.ratio);
  for (std::size_t k = 0; k <= last; ++k) {
    for (std::size_t i = plan.nodes.offsets[k]; i < plan.nodes.offsets[k + 1]; ++i) {
      if (plan.nodes.args[i] <= 0.0) continue;
      args_.push_back(plan.nodes.args[i]);
      weights_.push_back(k == last ? plan.nodes.weights[i] * boost : plan.nodes.weights[i]);
    }
  }
}

double ModularSampler::operator()(double lambda) const {
  const double inv = 1.0 / lambda;
  quad::CompensatedSum sum;
  for (std::size_t i = 0; i < args_.size(); ++i) sum.add(weights_[i] * Y_.G(args_[i] * inv));
  return sum.value();
}

NormResult luxemburg_norm(const SampledFunction& u, const Domain1D& dom, const YoungFunction& Y,
                          NormKind kind, double s) {
  if (kind == NormKind::SeminormSG) require_s(s);
  const ModularSampler phi(u, dom, Y, kind, s);
  NormResult out;
  if (phi.is_zero()) return out;
  out.modular = phi(1.0);
  if (!(out.modular > 0.0)) return out;
  if (!std::isfinite(out.modular)) throw NonFinite("modular of u is not finite");

  double lo = 1.0, hi = 1.0;
  double phi_lo = out.modular, phi_hi = out.modular;
  for (int i = 0; phi_hi > 1.0; ++i) {
    if (i > 2000) throw BracketError("no upper bracket for the Luxemburg norm");
    hi *= 2.0;
    phi_hi = phi(hi);
  }
  for (int i = 0; phi_lo < 1.0; ++i) {
    if (i > 2000) throw BracketError("no lower bracket for the Luxemburg norm");
    lo *= 0.5;
    phi_lo = phi(lo);
    if (!std::isfinite(phi_lo)) throw NonFinite("modular overflow while bracketing");
  }
  double mid = hi, phi_mid = phi_hi;
  for (int it = 0; it < 200; ++it) {
    mid = std::sqrt(lo * hi);
    phi_mid = phi(mid);
    if (std::abs(phi_mid - 1.0) <= 1e-9) break;
    if (phi_mid > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi / lo - 1.0 < 1e-15) break;
  }
  out.lambda = mid;
  out.modular_at_lambda = phi_mid;
  return out;
}

double xi_minus(const YoungFunction& Y, double t) {
  return std::min(std::pow(t, Y.p_minus()), std::pow(t, Y.p_plus()));
}

double xi_plus(const YoungFunction& Y, double t) {
  return std::max(std::pow(t, Y.p_minus()), std::pow(t, Y.p_plus()));
}

// ---------------------------------------------------------------------------

LgResult lg_membership(const SampledFunction& u, const YoungFunction& Y, double s, int n) {
  require_s(s);
  if (n < 1) throw ValidationError("dimension n must be >= 1");
  const double L = u.core_half_width();
  auto integrand = [&](double x) {
    const double ax = std::abs(x);
    const double arg = std::abs(u(x)) / (1.0 + std::pow(ax, s));
    return Y.g(arg) / (1.0 + std::pow(ax, n + s));
  };

  LgResult out;
  // The weights have |x|^s kinks at the origin.
  Domain1D core{-L, L, 8, 32, 3.0, {0.0}};
  std::vector<double> bps(u.breakpoints().begin(), u.breakpoints().end());
  bps.push_back(0.0);
  const auto nodes = core.rule(bps);
  quad::CompensatedSum sum;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double v = integrand(nodes.x[i]);
    require_finite(v, "g(|u|/(1+|x|^s))", nodes.x[i]);
    sum.add(nodes.w[i] * v);
  }
  out.core = sum.value();

  const auto& tail = u.tail();
  if (tail.kind == TailModel::Kind::Zero ||
      (tail.c == 0.0 && tail.c_left == 0.0)) {
    out.argument_exponent = -std::numeric_limits<double>::infinity();
    out.value = out.core;
    return out;
  }
  const double beta = tail.kind == TailModel::Kind::Constant ? -s : -tail.alpha - s;
  out.argument_exponent = beta;
  bool decided = beta <= 0.0;
  if (beta > 0.0) {
    const double e_lo = beta * (Y.p_minus() - 1.0) - n - s;
    const double e_hi = beta * (Y.p_plus() - 1.0) - n - s;
    if (e_lo >= -1.0)
      throw TailDivergence("weighted tail integrand decays like |y|^" + std::to_string(e_lo) +
                           " or slower");
    decided = e_hi < -1.0;
  }
  double tail_sum = 0.0;
  for (double side : {1.0, -1.0}) {
    auto f = [&](double r) { return integrand(side * r); };
    const auto t = quad::log_tail(f, L, 1e-13, 700.0);
    // A convergent exponent count lets the geometric remainder stand in for
    // slowly settling tails.
    if (!std::isfinite(t.value)) throw NonFinite("L_g tail integrand overflowed");
    if (!t.converged && !decided)
      throw TailDivergence("L_g tail integral does not settle numerically");
    tail_sum += t.value;
  }
  out.tail = tail_sum;
  out.value = out.core + out.tail;
  return out;
}

}  // namespace ofrac
