#include "ofrac/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "ofrac/errors.hpp"
#include "ofrac/quadrature.hpp"

namespace ofrac {
namespace {

void require_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ValidationError("s must lie in (0, 1)");
}

// Adds a root of d between consecutive edges wherever d changes sign there.
void split_at_sign_changes(std::vector<double>& edges, const std::function<double(double)>& d) {
  std::vector<double> roots;
  double da = d(edges.front());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double db = d(edges[i + 1]);
    if (da * db < 0.0) {
      std::uintmax_t iters = 40;
      const auto bracket = boost::math::tools::toms748_solve(
          d, edges[i], edges[i + 1], da, db, boost::math::tools::eps_tolerance<double>(40), iters);
      roots.push_back(0.5 * (bracket.first + bracket.second));
    }
    da = db;
  }
  edges.insert(edges.end(), roots.begin(), roots.end());
  std::sort(edges.begin(), edges.end());
}

// 2 * int_0^len dr int_lo^{hi-r} F(x, x + r) dx over dyadic shells in r,
// with panels in x split at every breakpoint b and b - r and at sign changes
// of diff(x, x + r) inside a panel.
double shell_double_integral(const std::function<double(double, double)>& F, double lo,
                             double hi, std::span<const double> breakpoints,
                             const std::function<double(double, double)>& diff) {
  constexpr int kRNodes = 16, kXOrder = 8, kXPanels = 1024;
  const double len = hi - lo;
  // The x-integrated function of r kinks wherever r is a breakpoint distance,
  // so shells wider than the breakpoint spacing are cut into panels of that width.
  double spacing = len;
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (breakpoints[i] > breakpoints[i - 1])
      spacing = std::min(spacing, breakpoints[i] - breakpoints[i - 1]);
  const auto& rule = quad::gauss_legendre(kRNodes);
  quad::CompensatedSum total;
  double prev = 0.0, last = 0.0, abs_total = 0.0;
  for (int k = 0;; ++k) {
    const double r_hi = len * std::ldexp(1.0, -k), r_lo = 0.5 * r_hi;
    const int pieces = static_cast<int>(std::ceil((r_hi - r_lo) / spacing - 1e-9));
    quad::CompensatedSum shell;
    for (int m = 0; m < pieces; ++m) {
      const double a = r_lo + (r_hi - r_lo) * m / pieces;
      const double b = r_lo + (r_hi - r_lo) * (m + 1) / pieces;
      const double t_lo = std::log(a), t_hi = std::log(b);
      const double half = 0.5 * (t_hi - t_lo), mid = 0.5 * (t_hi + t_lo);
      for (int j = 0; j < kRNodes; ++j) {
        const double r = std::exp(mid + half * rule.nodes[j]);
        const double wr = half * rule.weights[j] * r;
        const double x_hi = hi - r;
        std::vector<double> edges;
        for (int p = 0; p <= kXPanels; ++p) edges.push_back(lo + (x_hi - lo) * p / kXPanels);
        for (double bp : breakpoints) {
          if (bp > lo && bp < x_hi) edges.push_back(bp);
          if (bp - r > lo && bp - r < x_hi) edges.push_back(bp - r);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        if (diff) split_at_sign_changes(edges, [&](double x) { return diff(x, x + r); });
        const auto nodes = quad::composite_nodes(edges, kXOrder);
        for (std::size_t i = 0; i < nodes.x.size(); ++i)
          shell.add(2.0 * wr * nodes.w[i] * F(nodes.x[i], nodes.x[i] + r));
      }
    }
    prev = last;
    last = shell.value();
    total.add(last);
    abs_total += std::abs(last);
    if (k >= 8 && std::abs(last) <= 1e-15 * abs_total) break;
    if (r_lo <= 1e-13 * len) break;
  }
  double rem = 0.0;
  if (prev != 0.0) {
    const double q = last / prev;
    if (q >= 0.0 && q < 1.0) rem = last * q / (1.0 - q);
  }
  return total.value() + rem;
}

quad::NodeSet support_nodes(double lo, double hi, std::span<const double> breakpoints = {}) {
  std::vector<double> edges;
  for (int p = 0; p <= 16; ++p) edges.push_back(lo + (hi - lo) * p / 16.0);
  for (double b : breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return quad::composite_nodes(edges, 8);
}

}  // namespace

// ---------------------------------------------------------------------------

SourceFunction SourceFunction::constant(double c) {
  SourceFunction f;
  f.f = [c](double, double, double) { return c; };
  f.phi_sup = std::abs(c);
  f.monotone_r = true;
  f.depends_on_eta = false;
  f.label = "constant " + std::to_string(c);
  return f;
}

SourceFunction SourceFunction::linear_in_r(std::function<double(double)> a, double lambda,
                                           double a_sup, std::string label, double r_cap) {
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be nonnegative");
  if (!(r_cap >= 0.0)) throw ValidationError("r_cap must be nonnegative");
  SourceFunction f;
  f.f = [a = std::move(a), lambda](double x, double r, double) { return a(x) - lambda * r; };
  // The envelope holds on |r| <= r_cap only; phi absorbs lambda r_cap.
  f.phi_sup = a_sup + lambda * r_cap;
  f.gamma = [](double) { return 0.0; };
  f.monotone_r = true;
  f.depends_on_eta = false;
  f.label = std::move(label);
  return f;
}

std::vector<CheckReport> validate_source(const SourceFunction& f, const YoungFunction& Y, double a,
                                         double b, double r_max) {
  if (!(a < b)) throw ValidationError("validate_source needs a < b");
  std::vector<double> etas{0.0};
  for (int k = -8; k <= 8; ++k) etas.push_back(std::pow(10.0, 0.5 * k));
  std::vector<double> inv;
  for (double e : etas) inv.push_back(complementary_inverse(Y, e));

  CheckReport growth{"source_growth", true, {}, 0.0,
                     "|f| <= gamma(|r|) G~^{-1}(|eta|) + phi_sup on samples"};
  CheckReport mono{"source_monotone_r", true, {}, 0.0,
                   f.monotone_r ? "f nonincreasing in r on samples" : "monotonicity not claimed"};
  constexpr int kX = 41, kR = 41;
  for (int i = 0; i < kX; ++i) {
    const double x = a + (b - a) * i / (kX - 1);
    for (std::size_t e = 0; e < etas.size(); ++e) {
      double prev = std::numeric_limits<double>::quiet_NaN();
      for (int j = 0; j < kR; ++j) {
        const double r = -r_max + 2.0 * r_max * j / (kR - 1);
        const double v = f(x, r, etas[e]);
        const double bound = f.gamma(std::abs(r)) * inv[e] + f.phi_sup;
        const double excess = std::abs(v) - bound;
        const double ratio = bound > 0.0 ? std::abs(v) / bound : (v == 0.0 ? 0.0 : INFINITY);
        if (ratio > growth.achieved_constant) growth.achieved_constant = ratio;
        if (!std::isfinite(v) || excess > 1e-12 * std::max(1.0, bound)) {
          if (growth.passed) growth.worst_sample = {x, r, etas[e]};
          growth.passed = false;
        }
        if (f.monotone_r && j > 0 && v - prev > 1e-12 * std::max(1.0, std::abs(v))) {
          if (mono.passed) mono.worst_sample = {x, r, etas[e]};
          mono.passed = false;
        }
        prev = v;
      }
    }
  }
  return {growth, mono};
}

double gamma_infinity(const SourceFunction& f, double sup_u) {
  double m = 0.0;
  for (int i = 0; i <= 200; ++i) m = std::max(m, f.gamma(sup_u * i / 200.0));
  return m;
}

SourceFunction f_epsilon(const SourceFunction& f, double r_eps,
                         std::optional<std::pair<double, double>> clamp) {
  if (!(r_eps > 0.0)) throw ValidationError("r_eps must be positive");
  SourceFunction out = f;
  auto base = std::make_shared<SourceFunction>(f);
  out.f = [base, r_eps, clamp](double x, double r, double eta) {
    double lo = x - r_eps, hi = x + r_eps;
    if (clamp) {
      lo = std::max(lo, clamp->first);
      hi = std::min(hi, clamp->second);
      if (hi < lo) lo = hi = std::clamp(x, clamp->first, clamp->second);
    }
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 200; ++k) m = std::min(m, (*base)(lo + (hi - lo) * k / 200.0, r, eta));
    return m;
  };
  out.label = f.label + " (inf over B(x, " + std::to_string(r_eps) + "))";
  return out;
}

// ---------------------------------------------------------------------------

SampledFunction TestFunction::as_sampled() const {
  return make_generator("bump", {{"center", center}, {"radius", radius}, {"height", height}});
}

std::vector<TestFunction> bump_basis(double a, double b) {
  if (!(a < b)) throw ValidationError("bump basis needs a < b");
  std::vector<TestFunction> out;
  const double len = b - a;
  for (double frac : {0.08, 0.15, 0.25}) {
    const double r = frac * len;
    for (int j = 0; j < 8; ++j) {
      const double c = a + r + (len - 2.0 * r) * (j + 0.5) / 8.0;
      out.push_back({c, r, 1.0});
    }
  }
  return out;
}

WeakPair weak_form_pair(const SampledFunction& u, const TestFunction& psi, const YoungFunction& Y,
                        double s, const SourceFunction& f, const QuadratureConfig& cfg) {
  require_s(s);
  cfg.validate();
  const double lo = psi.lo(), hi = psi.hi();
  WeakPair out;

  auto F = [&](double x, double y) {
    const double r = std::abs(y - x);
    return Y.g((u(x) - u(y)) / std::pow(r, s)) * (psi(x) - psi(y)) / std::pow(r, 1.0 + s);
  };
  out.lhs_support = shell_double_integral(F, lo, hi, u.breakpoints(),
                                          [&](double x, double y) { return u(x) - u(y); });

  const auto nodes = support_nodes(lo, hi, u.breakpoints());
  quad::CompensatedSum ext, rhs;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double x = nodes.x[i];
    const double px = psi(x);
    if (px == 0.0) continue;
    const double ux = u(x);
    const double dl = x - lo, dr = hi - x;
    // Both sides in the distance variable so growing data cancels in pairs.
    auto h = [&](double t) {
      double v = 0.0;
      const double ts = std::pow(t, s);
      if (t >= dl) v += Y.g((ux - u(x - t)) / ts);
      if (t >= dr) v += Y.g((ux - u(x + t)) / ts);
      return v * std::pow(t, -1.0 - s);
    };
    std::vector<double> breaks{std::max(dl, dr)};
    for (double b : u.breakpoints()) breaks.push_back(std::abs(b - x));
    std::sort(breaks.begin(), breaks.end());
    const double t0 = std::min(dl, dr);
    const double R = std::max(cfg.R_max, 2.0 * (hi - lo));
    const auto edges = quad::panel_edges(t0, R, breaks, 2.0);
    quad::CompensatedSum Ex;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
      Ex.add(quad::adaptive(h, edges[k], edges[k + 1], 1e-10, nullptr, 30));
    const auto tail = quad::log_tail(h, R, 1e-13, 700.0);
    if (!tail.converged) throw TailDivergence("weak-form exterior integral does not settle");
    Ex.add(tail.value);
    ext.add(2.0 * nodes.w[i] * px * Ex.value());

    const double eta = f.depends_on_eta ? eval_g_gradient(u, x, Y, s, cfg) : 0.0;
    rhs.add(nodes.w[i] * f(x, ux, eta) * px);
  }
  // Half the symmetric double integral, so that lhs = int psi (-Delta_g)^s u
  // for smooth u and weak and pointwise solutions coincide.
  out.lhs_support *= 0.5;
  out.lhs_exterior = 0.5 * ext.value();
  out.lhs = out.lhs_support + out.lhs_exterior;
  out.rhs = rhs.value();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct TouchSetup {
  SampledFunction psi;
  double step = 0.0;
};

TouchSetup build_touch(const SampledFunction& u, double x0, const Touch& t) {
  if (!(t.radius > 0.0)) throw ValidationError("touch radius must be positive");
  const double u0 = u(x0);
  auto base = std::make_shared<SampledFunction>(u);
  auto psi_fn = [base, x0, u0, t](double x) {
    const double d = x - x0;
    if (std::abs(d) < t.radius) return u0 + t.gradient * d - 0.5 * t.curvature * d * d;
    return (*base)(x);
  };
  std::vector<double> bps{x0 - t.radius, x0 + t.radius};
  for (double b : u.breakpoints())
    if (std::abs(b - x0) >= t.radius) bps.push_back(b);
  std::optional<double> lip;
  if (u.lipschitz_hint())
    lip = std::max(*u.lipschitz_hint(), std::abs(t.gradient) + std::abs(t.curvature) * t.radius);
  TouchSetup out{SampledFunction::closed_form("touching_paraboloid", psi_fn,
                                              u.core_half_width() + std::abs(x0) + t.radius,
                                              u.tail(), std::move(bps), lip),
                 0.0};
  double data_h = t.radius / 20.0;
  if (u.is_grid()) {
    data_h = u.spacing();
  } else {
    const auto b = u.breakpoints();
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
      if (b[i + 1] > b[i]) data_h = std::min(data_h, b[i + 1] - b[i]);
  }
  out.step = data_h / 10.0;
  return out;
}

}  // namespace

Touch touch_from_below(const SampledFunction& u, double x0, double radius) {
  Touch t;
  t.radius = radius;
  const double d = 1e-7 * std::max(radius, 1e-300);
  t.gradient = (u(x0 + d) - u(x0 - d)) / (2.0 * d);
  const double u0 = u(x0);
  double need = 0.0;
  auto visit = [&](double y) {
    const double e = y - x0;
    if (std::abs(e) < 1e-12 || std::abs(e) >= radius) return;
    need = std::max(need, 2.0 * (u0 + t.gradient * e - u(y)) / (e * e));
  };
  for (int k = -2000; k <= 2000; ++k) visit(x0 + radius * k / 2000.0);
  for (double b : u.breakpoints()) visit(b);
  t.curvature = 1.5 * need + 1e-9;
  return t;
}

CheckReport viscosity_point_check(const SampledFunction& u, double x0, const Touch& touch,
                                  const YoungFunction& Y, double s, const SourceFunction& f,
                                  const QuadratureConfig& cfg, double tolerance) {
  require_s(s);
  const auto setup = build_touch(u, x0, touch);
  const auto& psi = setup.psi;
  const long n = static_cast<long>(std::ceil(touch.radius / setup.step));
  auto check = [&](double y) {
    const double excess = psi(y) - u(y);
    if (excess > 1e-12 * std::max(1.0, std::abs(u(y))))
      throw TouchViolation("paraboloid exceeds u at y = " + std::to_string(y) + " by " +
                           std::to_string(excess));
  };
  for (long k = -n; k <= n; ++k) check(x0 + touch.radius * static_cast<double>(k) / n);
  for (double b : u.breakpoints())
    if (std::abs(b - x0) < touch.radius) check(b);

  const double lhs = eval_pv_glaplacian(psi, x0, Y, s, cfg).value;
  const double eta = f.depends_on_eta ? eval_g_gradient(psi, x0, Y, s, cfg) : 0.0;
  const double rhs = f(x0, psi(x0), eta);
  CheckReport rep;
  rep.name = "viscosity_point";
  rep.achieved_constant = lhs - rhs;
  rep.passed = lhs - rhs >= -tolerance;
  rep.worst_sample = {x0, lhs, rhs};
  rep.notes = "margin (-Delta_g)^s psi(x0) - f(x0, psi(x0), D_g^s psi(x0))";
  return rep;
}

CheckReport caccioppoli_report(const SampledFunction& u, const TestFunction& xi,
                               const YoungFunction& Y, double s, const SourceFunction& f,
                               const QuadratureConfig& cfg) {
  require_s(s);
  const auto nodes = support_nodes(xi.lo(), xi.hi());
  const auto xi_fn = xi.as_sampled();
  quad::CompensatedSum lhs, dxi;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double x = nodes.x[i];
    const double Gx = Y.G(xi(x));
    if (Gx > 0.0) lhs.add(nodes.w[i] * Gx * eval_g_gradient(u, x, Y, s, cfg));
    dxi.add(nodes.w[i] * eval_g_gradient(xi_fn, x, Y, s, cfg));
  }
  const double osc = u.oscillation();
  const double gam = gamma_infinity(f, u.sup_abs());
  const double bracket = Y.G(osc) * (dxi.value() + gam) + osc;
  CheckReport rep;
  rep.name = "caccioppoli";
  const double L = lhs.value();
  rep.achieved_constant = bracket > 0.0 ? L / bracket : (L == 0.0 ? 0.0 : INFINITY);
  rep.passed = std::isfinite(rep.achieved_constant);
  rep.worst_sample = {L, bracket, osc};
  rep.notes = "ratio of the energy term to G(osc)(int D_g^s xi + gamma_inf) + osc";
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double half_hat_integral(double m, double s, bool toward) {
  const auto& rule = quad::gauss_legendre(32);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double v = 0.5 * (rule.nodes[k] + 1.0);
    const double d = toward ? m - v : m + v;
    sum += 0.5 * rule.weights[k] * (1.0 - v) * std::pow(d, -1.0 - s);
  }
  return sum;
}

}  // namespace

DirichletSolver::DirichletSolver(double a, double b, SampledFunction exterior, YoungFunction Y,
                                 double s, SourceFunction f, DirichletOptions options)
    : a_(a), b_(b), s_(s), ext_(std::move(exterior)), Y_(std::move(Y)), f_(std::move(f)),
      opt_(options) {
  require_s(s);
  if (!(a < b)) throw ValidationError("solver domain needs a < b");
  if (opt_.nodes < 3) throw ValidationError("solver needs at least 3 nodes");
  if (!(opt_.damping > 0.0 && opt_.damping <= 1.0))
    throw ValidationError("damping must lie in (0, 1]");
  if (!f_.monotone_r) throw NonMonotoneSource("source must be flagged nonincreasing in r");
  if (!(Y_.p_minus() > critical_index(s)))
    throw ValidationError("the nodal scheme needs p- > 2/(2 - s)");
  if (!std::isfinite(ext_.sup_abs())) throw ValidationError("exterior data must be bounded");

  const std::size_t N = static_cast<std::size_t>(opt_.nodes);
  h_ = (b - a) / static_cast<double>(N - 1);
  x_.resize(N);
  for (std::size_t i = 0; i < N; ++i) x_[i] = a + h_ * static_cast<double>(i);
  x_.back() = b;

  far_w_.assign(N, 0.0);
  edge_w_.assign(N, 0.0);
  dist_s_.assign(N, 0.0);
  for (std::size_t m = 1; m < N; ++m) {
    const double md = static_cast<double>(m);
    const double away = half_hat_integral(md, s, false);
    const double toward = m >= 2 ? half_hat_integral(md, s, true) : 0.0;
    far_w_[m] = (away + toward) * std::pow(h_, -s);
    edge_w_[m] = toward * std::pow(h_, -s);
    dist_s_[m] = std::pow(h_ * md, -s);
  }

  // Near field: u(x_i +- r) - u_i is modelled as delta_{+-} (r / h)^2, which
  // keeps the node coupling monotone and still cancels linear data exactly.
  // In t = -log(r / h) the integrand decays like e^{-rate t}.
  const double rate = (2.0 - s) * (Y_.p_minus() - 1.0) - s;
  const double T = std::min(40.0 / rate, 700.0);
  std::vector<double> edges;
  for (int p = 0; p <= 10; ++p) edges.push_back(T * p / 10.0);
  const auto near = quad::composite_nodes(edges, 8);
  near_c_.resize(near.x.size());
  near_w_.resize(near.x.size());
  near_dt_ = near.w;
  for (std::size_t k = 0; k < near.x.size(); ++k) {
    near_c_[k] = std::pow(h_, -s) * std::exp(-(2.0 - s) * near.x[k]);
    near_w_[k] = near.w[k] * std::exp(s * near.x[k]) * std::pow(h_, -s);
  }

  // Exterior nodes at distance t beyond each endpoint, dyadic panels.
  std::vector<double> t_edges{0.0, h_};
  while (t_edges.back() < 1e7 * std::max(1.0, b - a)) t_edges.push_back(2.0 * t_edges.back());
  const auto tq = quad::composite_nodes(t_edges, 4);
  ext_val_.assign(N, {});
  ext_ds_.assign(N, {});
  ext_w_.assign(N, {});
  for (std::size_t i = 1; i + 1 < N; ++i) {
    for (int side = 0; side < 2; ++side) {
      for (std::size_t q = 0; q < tq.x.size(); ++q) {
        const double y = side == 0 ? a - tq.x[q] : b + tq.x[q];
        const double d = std::abs(x_[i] - y);
        ext_val_[i].push_back(ext_(y));
        ext_ds_[i].push_back(std::pow(d, -s));
        ext_w_[i].push_back(tq.w[q] * std::pow(d, -1.0 - s));
      }
    }
  }

  u_.assign(N, 0.0);
  u_.front() = ext_(a);
  u_.back() = ext_(b);
  const double init = 0.5 * (u_.front() + u_.back());
  for (std::size_t i = 1; i + 1 < N; ++i) u_[i] = init;
}

void DirichletSolver::set_values(std::vector<double> v) {
  if (v.size() != x_.size()) throw ValidationError("value vector has the wrong size");
  v.front() = ext_(a_);
  v.back() = ext_(b_);
  u_ = std::move(v);
}

double DirichletSolver::gradient_at(std::size_t i) const {
  // Same product rule as the operator, applied to G(|D_s u|) |x - y|^s
  // against the kernel |x - y|^{-1-s}.
  const std::size_t N = x_.size();
  const double v = u_[i];
  quad::CompensatedSum sum;
  for (std::size_t j = 0; j < N; ++j) {
    if (j == i) continue;
    const std::size_t m = j > i ? j - i : i - j;
    const double w = (j == 0 || j == N - 1) ? edge_w_[m] : far_w_[m];
    sum.add(w / dist_s_[m] * Y_.G((v - u_[j]) * dist_s_[m]));
  }
  for (std::size_t q = 0; q < ext_val_[i].size(); ++q)
    sum.add(ext_w_[i][q] / ext_ds_[i][q] * Y_.G((v - ext_val_[i][q]) * ext_ds_[i][q]));
  for (std::size_t k = 0; k < near_c_.size(); ++k)
    for (double nb : {u_[i + 1], u_[i - 1]}) sum.add(near_dt_[k] * Y_.G((nb - v) * near_c_[k]));
  return sum.value();
}

double DirichletSolver::operator_at(std::size_t i, double v, double* derivative) const {
  const std::size_t N = x_.size();
  double op = 0.0, dop = 0.0;
  const bool want_d = derivative != nullptr;
  for (std::size_t j = 0; j < N; ++j) {
    if (j == i) continue;
    const std::size_t m = j > i ? j - i : i - j;
    const double w = (j == 0 || j == N - 1) ? edge_w_[m] : far_w_[m];
    if (w == 0.0) continue;
    const double arg = (v - u_[j]) * dist_s_[m];
    op += w * Y_.g(arg);
    if (want_d) dop += w * Y_.dg(arg) * dist_s_[m];
  }
  const auto& ev = ext_val_[i];
  const auto& eds = ext_ds_[i];
  const auto& ew = ext_w_[i];
  for (std::size_t q = 0; q < ev.size(); ++q) {
    const double arg = (v - ev[q]) * eds[q];
    op += ew[q] * Y_.g(arg);
    if (want_d) dop += ew[q] * Y_.dg(arg) * eds[q];
  }
  for (std::size_t k = 0; k < near_c_.size(); ++k) {
    const double c = near_c_[k];
    for (double nb : {u_[i + 1], u_[i - 1]}) {
      const double arg = (v - nb) * c;
      op += near_w_[k] * Y_.g(arg);
      if (want_d) dop += near_w_[k] * Y_.dg(arg) * c;
    }
  }
  if (derivative) *derivative = dop;
  return op;
}

double DirichletSolver::source_at(std::size_t i, double v) const {
  const double eta = f_.depends_on_eta ? gradient_at(i) : 0.0;
  return f_(x_[i], v, eta);
}

double DirichletSolver::solve_node(std::size_t i) const {
  const double eta = f_.depends_on_eta ? gradient_at(i) : 0.0;
  const double xi = x_[i];
  auto F = [&](double v, double* d) { return operator_at(i, v, d) - f_(xi, v, eta); };

  double v = u_[i];
  double dF = 0.0;
  double Fv = F(v, &dF);
  if (Fv == 0.0) return v;
  // Bracket the root; F is nondecreasing in v.
  double lo = v, hi = v;
  double step = std::max(1e-3, 1e-3 * std::abs(v));
  if (dF > 0.0) step = std::max(std::min(step, 2.0 * std::abs(Fv) / dF), 1e-14);
  bool bracketed = false;
  for (int k = 0; k < 200 && !bracketed; ++k, step *= 2.0) {
    if (Fv > 0.0) {
      hi = lo;
      lo -= step;
      bracketed = F(lo, nullptr) <= 0.0;
    } else {
      lo = hi;
      hi += step;
      bracketed = F(hi, nullptr) >= 0.0;
    }
  }
  if (!bracketed) throw BracketError("no bracket for the nodal equation");
  for (int it = 0; it < 200; ++it) {
    double next = (dF > 0.0) ? v - Fv / dF : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - v);
    v = next;
    Fv = F(v, &dF);
    if (Fv == 0.0) return v;
    if (Fv > 0.0)
      hi = v;
    else
      lo = v;
    if (change <= 1e-15 * std::max(1.0, std::abs(v)) ||
        hi - lo <= 4e-16 * std::max(1.0, std::abs(v)))
      return v;
  }
  return v;
}

bool DirichletSolver::newton_step() {
  const std::size_t N = x_.size();
  const std::size_t n = N - 2;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  Eigen::VectorXd R(static_cast<Eigen::Index>(n));
  double r0 = 0.0;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const auto row = static_cast<Eigen::Index>(i - 1);
    double diag = 0.0;
    const double v = u_[i];
    const double fv = source_at(i, v);
    R(row) = operator_at(i, v, &diag) - fv;
    // Source slope in r by a one-sided difference (it is <= 0 by assumption).
    const double dv = 1e-7 * std::max(1.0, std::abs(v));
    diag -= (source_at(i, v + dv) - fv) / dv;
    J(row, row) = diag;
    for (std::size_t j = 1; j + 1 < N; ++j) {
      if (j == i) continue;
      const std::size_t m = j > i ? j - i : i - j;
      const double arg = (v - u_[j]) * dist_s_[m];
      double c = -far_w_[m] * Y_.dg(arg) * dist_s_[m];
      if (m == 1)
        for (std::size_t k = 0; k < near_c_.size(); ++k)
          c -= near_w_[k] * Y_.dg((v - u_[j]) * near_c_[k]) * near_c_[k];
      J(row, static_cast<Eigen::Index>(j - 1)) = c;
    }
    r0 = std::max(r0, std::abs(R(row)));
  }
  if (r0 == 0.0) return false;
  const Eigen::VectorXd delta = J.partialPivLu().solve(-R);
  if (!delta.allFinite()) return false;
  const std::vector<double> base = u_;
  for (double theta = 1.0; theta > 1e-6; theta *= 0.5) {
    for (std::size_t i = 1; i + 1 < N; ++i) u_[i] = base[i] + theta * delta(static_cast<Eigen::Index>(i - 1));
    if (max_residual() < (1.0 - 1e-4 * theta) * r0) return true;
  }
  u_ = base;
  return false;
}

double DirichletSolver::sweep() {
  double max_update = 0.0;
  for (std::size_t i = 1; i + 1 < x_.size(); ++i) {
    const double target = solve_node(i);
    const double update = opt_.damping * (target - u_[i]);
    u_[i] += update;
    max_update = std::max(max_update, std::abs(update));
  }
  ++sweeps_;
  return max_update;
}

int DirichletSolver::solve() {
  if (opt_.newton_warm_start) {
    for (int k = 0; k < 10; ++k) sweep();
    for (int k = 0; k < 60; ++k) {
      if (!newton_step()) break;
      if (max_residual() < 1e-13) break;
    }
  }
  for (int k = 0; k < opt_.max_sweeps; ++k)
    if (sweep() < opt_.tolerance) return sweeps_;
  throw MaxIterations("Gauss-Seidel did not converge in " + std::to_string(opt_.max_sweeps) +
                      " sweeps; max residual " + std::to_string(max_residual()));
}

double DirichletSolver::residual(std::size_t i) const {
  if (i == 0 || i + 1 >= x_.size()) return 0.0;
  return operator_at(i, u_[i], nullptr) - source_at(i, u_[i]);
}

double DirichletSolver::max_residual() const {
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < x_.size(); ++i) m = std::max(m, std::abs(residual(i)));
  return m;
}

SampledFunction DirichletSolver::solution() const {
  auto xs = std::make_shared<std::vector<double>>(x_);
  auto us = std::make_shared<std::vector<double>>(u_);
  auto ext = std::make_shared<SampledFunction>(ext_);
  const double a = a_, b = b_, h = h_;
  auto fn = [xs, us, ext, a, b, h](double y) {
    if (y < a || y > b) return (*ext)(y);
    const double pos = (y - a) / h;
    auto k = static_cast<std::size_t>(pos);
    if (k >= xs->size() - 1) k = xs->size() - 2;
    const double t = pos - static_cast<double>(k);
    return (*us)[k] + t * ((*us)[k + 1] - (*us)[k]);
  };
  std::vector<double> bps = x_;
  for (double e : ext_.breakpoints())
    if (e < a_ || e > b_) bps.push_back(e);
  double lip = 0.0;
  for (std::size_t k = 0; k + 1 < u_.size(); ++k)
    lip = std::max(lip, std::abs(u_[k + 1] - u_[k]) / h_);
  if (ext_.lipschitz_hint()) lip = std::max(lip, *ext_.lipschitz_hint());
  const double L = std::max({std::abs(a_), std::abs(b_), ext_.core_half_width()});
  return SampledFunction::closed_form("dirichlet_solution", fn, L, ext_.tail(), std::move(bps), lip);
}

SampledFunction solve_dirichlet(double a, double b, const SampledFunction& exterior,
                                const YoungFunction& Y, double s, const SourceFunction& f,
                                DirichletOptions options) {
  DirichletSolver solver(a, b, exterior, Y, s, f, options);
  solver.solve();
  return solver.solution();
}

CheckReport comparison_report(const std::vector<double>& lower, const std::vector<double>& upper,
                              double tol) {
  if (lower.size() != upper.size()) throw ValidationError("comparison needs equal sizes");
  CheckReport rep{"discrete_comparison", true, {}, -INFINITY, "max(lower - upper) over nodes"};
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const double d = lower[i] - upper[i];
    if (d > rep.achieved_constant) {
      rep.achieved_constant = d;
      rep.worst_sample = {static_cast<double>(i), lower[i], upper[i]};
    }
  }
  if (lower.empty()) rep.achieved_constant = 0.0;
  rep.passed = rep.achieved_constant <= tol;
  return rep;
}

}  // namespace ofrac
