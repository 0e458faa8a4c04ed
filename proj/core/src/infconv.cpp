#include "ofrac/infconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "ofrac/errors.hpp"

namespace ofrac {
namespace {

constexpr double kArgminBand = 1e-10;

std::vector<double> default_nodes(const SampledFunction& u) {
  if (u.is_grid()) return u.nodes();
  const double L = u.core_half_width();
  std::vector<double> x(2001);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = -L + 2.0 * L * static_cast<double>(i) / static_cast<double>(x.size() - 1);
  return x;
}

double node_spacing(const std::vector<double>& x) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) h = std::min(h, x[i + 1] - x[i]);
  return h;
}

}  // namespace

double choose_q(double p_minus, double s) {
  if (!(p_minus > 1.0)) throw ValidationError("p- must exceed 1");
  if (!(s > 0.0 && s < 1.0)) throw ValidationError("s must lie in (0, 1)");
  if (p_minus > 2.0 / (2.0 - s)) return 2.0;
  return s * p_minus / (p_minus - 1.0) + 1.0;
}

InfConvParams make_infconv_params(const SampledFunction& u, double epsilon, double q) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(q >= 2.0)) throw ValidationError("q must be >= 2");
  const double osc = u.oscillation();
  const auto lip = u.lipschitz_hint();
  InfConvParams p;
  p.epsilon = epsilon;
  p.q = q;
  p.window_radius = std::numeric_limits<double>::infinity();
  if (std::isfinite(osc)) p.window_radius = std::pow(q * std::pow(epsilon, q - 1.0) * osc, 1.0 / q);
  // Lipschitz u: the penalty at a minimizer is at most Lip |x - y|.
  if (lip && std::isfinite(*lip)) {
    p.lipschitz = *lip;
    p.window_radius =
        std::min(p.window_radius, std::pow(q * std::pow(epsilon, q - 1.0) * *lip, 1.0 / (q - 1.0)));
  }
  if (!std::isfinite(p.window_radius))
    throw ValidationError("infimal convolution needs bounded or Lipschitz u");
  return p;
}

double semiconcavity_constant(const InfConvParams& p) {
  return p.q * (p.q - 1.0) * std::pow(p.window_radius, p.q - 2.0) /
         (p.q * std::pow(p.epsilon, p.q - 1.0));
}

InfConvResult inf_convolve(const SampledFunction& u, const InfConvParams& params,
                           std::vector<double> nodes) {
  if (!(params.epsilon > 0.0) || !(params.q >= 2.0) || !(params.window_radius >= 0.0))
    throw ValidationError("invalid infimal-convolution parameters");
  if (nodes.empty()) nodes = default_nodes(u);
  if (!std::is_sorted(nodes.begin(), nodes.end()))
    throw ValidationError("infimal-convolution nodes must be sorted");

  InfConvResult out;
  out.params = params;
  out.x = nodes;
  out.semiconcavity_bound = semiconcavity_constant(params);
  const double r = params.window_radius;
  const double scale = 1.0 / (params.q * std::pow(params.epsilon, params.q - 1.0));
  double h = nodes.size() > 1 ? node_spacing(nodes) : r;
  if (u.is_grid()) h = std::min(h, u.spacing());
  if (r > 0.0) h = std::min(h, r / 64.0);
  const double L = u.core_half_width();
  const long K = r > 0.0 ? static_cast<long>(std::floor(r / h)) : 0;

  out.values.resize(nodes.size());
  out.argmin.resize(nodes.size());
  std::vector<double> obj(2 * K + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    auto objective = [&](double y) { return u(y) + scale * std::pow(std::abs(x - y), params.q); };
    double m_disc = std::numeric_limits<double>::infinity();
    double spread = 0.0;
    for (long k = -K; k <= K; ++k) {
      const double y = x + static_cast<double>(k) * h;
      if (std::abs(y) > L) out.window_clipped = true;
      obj[k + K] = objective(y);
      m_disc = std::min(m_disc, obj[k + K]);
      if (k > -K) spread = std::max(spread, std::abs(obj[k + K] - obj[k + K - 1]));
    }
    std::vector<std::pair<double, double>> found;  // (y, objective)
    for (long k = -K; k <= K; ++k) {
      const double v = obj[k + K];
      const bool left_ok = k == -K || v <= obj[k + K - 1];
      const bool right_ok = k == K || v <= obj[k + K + 1];
      if (!left_ok || !right_ok || v > m_disc + spread + kArgminBand) continue;
      const double y = x + static_cast<double>(k) * h;
      found.emplace_back(y, v);
      const double lo = std::max(y - h, x - r), hi = std::min(y + h, x + r);
      if (hi > lo) {
        const auto [ys, vs] = boost::math::tools::brent_find_minima(objective, lo, hi, 52);
        if (vs < v) found.emplace_back(ys, vs);
      }
    }
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : found) m = std::min(m, f.second);
    std::vector<double> ys;
    for (const auto& f : found)
      if (f.second <= m + kArgminBand) ys.push_back(f.first);
    std::sort(ys.begin(), ys.end());
    std::vector<double> unique;
    for (double y : ys)
      if (unique.empty() || y - unique.back() > 1e-9 * std::max(1.0, std::abs(y)))
        unique.push_back(y);
    out.values[i] = m;
    out.argmin[i] = std::move(unique);
  }
  return out;
}

std::vector<CheckReport> propinfconv_report(const SampledFunction& u,
                                            const std::vector<double>& epsilons, double q,
                                            std::vector<double> nodes) {
  if (epsilons.empty()) throw ValidationError("need at least one epsilon");
  for (std::size_t k = 0; k + 1 < epsilons.size(); ++k)
    if (!(epsilons[k + 1] < epsilons[k])) throw ValidationError("epsilons must decrease");
  if (nodes.empty()) nodes = default_nodes(u);

  std::vector<InfConvResult> runs;
  for (double eps : epsilons) runs.push_back(inf_convolve(u, make_infconv_params(u, eps, q), nodes));
  std::vector<double> uv(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) uv[i] = u(nodes[i]);
  const double osc = u.oscillation();

  CheckReport below{"infconv_below_u", true, {}, 0.0, "u_eps <= u at every node"};
  CheckReport mono{"infconv_monotone_in_epsilon", true, {}, 0.0,
                   "u_eps nondecreasing nodewise as epsilon decreases"};
  CheckReport gap{"infconv_sup_gap_decreasing", true, {}, 0.0, "sup |u - u_eps| per epsilon"};
  CheckReport semi{"infconv_semiconcavity", true, {}, 0.0,
                   "max centered second difference against 2C"};
  CheckReport stat{"infconv_stationary_points", true, {}, 0.0,
                   "u_eps = u where the discrete gradient of u_eps vanishes and the minimizer is unique"};
  CheckReport win{"infconv_argmin_window", true, {}, 0.0,
                  "minimizer set nonempty and inside B(x, r(eps))"};
  CheckReport lip{"infconv_lipschitz", true, {}, 0.0,
                  "discrete differences against min(osc(u) q / r(eps), Lip u)"};

  double prev_gap = std::numeric_limits<double>::infinity();
  std::size_t stationary_nodes = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& run = runs[k];
    const double eps = epsilons[k];
    const double C = run.semiconcavity_bound;
    double sup_gap = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double d = run.values[i] - uv[i];
      below.achieved_constant = std::max(below.achieved_constant, d);
      if (d > 1e-12) {
        below.passed = false;
        below.worst_sample = {eps, nodes[i]};
      }
      sup_gap = std::max(sup_gap, -d);
      if (k > 0) {
        const double drop = runs[k - 1].values[i] - run.values[i];
        mono.achieved_constant = std::max(mono.achieved_constant, drop);
        if (drop > 1e-12) {
          mono.passed = false;
          mono.worst_sample = {eps, nodes[i]};
        }
      }
      const auto& Ys = run.argmin[i];
      bool ok = !Ys.empty();
      for (double y : Ys) ok = ok && std::abs(y - nodes[i]) <= run.params.window_radius * (1 + 1e-12) + 1e-12;
      if (!ok) {
        win.passed = false;
        win.worst_sample = {eps, nodes[i]};
      }
    }
    gap.notes += (k ? ", " : "; sup gaps: ") + std::to_string(sup_gap);
    if (sup_gap > prev_gap * (1.0 + 1e-9) + 1e-12) {
      gap.passed = false;
      gap.worst_sample = {eps, sup_gap};
    }
    prev_gap = sup_gap;

    double lip_bound = std::isfinite(osc) && run.params.window_radius > 0.0
                           ? osc * q / run.params.window_radius
                           : std::numeric_limits<double>::infinity();
    if (run.params.lipschitz) lip_bound = std::min(lip_bound, *run.params.lipschitz);
    if (!std::isfinite(lip_bound)) lip_bound = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double h = nodes[i + 1] - nodes[i];
      const double slope = std::abs(run.values[i + 1] - run.values[i]) / h;
      lip.achieved_constant = std::max(lip.achieved_constant, slope);
      if (slope > lip_bound * (1.0 + 1e-9) + 1e-9) {
        lip.passed = false;
        lip.worst_sample = {eps, nodes[i]};
      }
    }
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
      const double hl = nodes[i] - nodes[i - 1], hr = nodes[i + 1] - nodes[i];
      const double dl = (run.values[i] - run.values[i - 1]) / hl;
      const double dr = (run.values[i + 1] - run.values[i]) / hr;
      const double second = 2.0 * (dr - dl) / (hl + hr);
      semi.achieved_constant = std::max(semi.achieved_constant, second);
      if (second > 2.0 * C * (1.0 + 1e-9) + 1e-9) {
        semi.passed = false;
        semi.worst_sample = {eps, nodes[i]};
      }
      const double h = std::max(hl, hr);
      // Several minimizers mark a concave kink, where u_eps is not differentiable.
      if (run.argmin[i].size() == 1 && std::abs(0.5 * (dl + dr)) <= 1e-6) {
        ++stationary_nodes;
        const double diff = std::abs(run.values[i] - uv[i]);
        stat.achieved_constant = std::max(stat.achieved_constant, diff);
        if (diff > 2.0 * C * h * h + 1e-9) {
          stat.passed = false;
          stat.worst_sample = {eps, nodes[i]};
        }
      }
    }
  }
  stat.notes += "; nodes examined: " + std::to_string(stationary_nodes);
  semi.notes += "; Alexandrov twice-differentiability itself is not checked";
  return {below, mono, gap, semi, stat, win, lip};
}

}  // namespace ofrac
