#include "ofrac/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ofrac::quad {

namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static const std::array<GaussRule, 129> rules = [] {
    std::array<GaussRule, 129> r;
    for (int k = 1; k <= 128; ++k) r[k] = build_rule(k);
    return r;
  }();
  if (n < 1 || n > 128) throw std::out_of_range("gauss_legendre: n out of range");
  return rules[n];
}

double gauss(const std::function<double(double)>& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

double composite(const std::function<double(double)>& f,
                 std::span<const double> edges, int n) {
  CompensatedSum sum;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    if (edges[k + 1] > edges[k]) sum.add(gauss(f, edges[k], edges[k + 1], n));
  return sum.value();
}

namespace {

struct Gk15 {
  double kronrod;
  double gauss;
};

Gk15 gk15(const std::function<double(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& x = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  const double f0 = f(mid);
  double k = wk[0] * f0;
  double g = wg[0] * f0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fl = f(mid - half * x[i]);
    const double fr = f(mid + half * x[i]);
    k += wk[i] * (fl + fr);
    // Gauss nodes sit at the even positions of the Kronrod abscissae.
    if (i % 2 == 0) g += wg[i / 2] * (fl + fr);
  }
  return {k * half, g * half};
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, double* error, int max_depth) {
  if (!(b > a)) {
    if (error) *error = 0.0;
    return 0.0;
  }
  // Global refinement: always split the panel with the largest error, so a
  // discontinuity costs a bounded number of panels.
  struct Panel {
    double a, b, value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  constexpr std::size_t kMaxPanels = 4000;
  auto make = [&](double lo, double hi, int depth) {
    const auto r = gk15(f, lo, hi);
    return Panel{lo, hi, r.kronrod, std::abs(r.kronrod - r.gauss), depth};
  };
  std::priority_queue<Panel> open;
  std::vector<Panel> done;
  open.push(make(a, b, 0));
  CompensatedSum total, err_total;
  total.add(open.top().value);
  err_total.add(open.top().error);
  while (!open.empty()) {
    const double tol = std::max(rel_tol * std::abs(total.value()), 1e-300) + 1e-15 * rel_tol;
    if (err_total.value() <= tol || open.size() + done.size() >= kMaxPanels) break;
    const Panel p = open.top();
    open.pop();
    if (p.depth >= max_depth || !(p.b - p.a > 1e-15 * (std::abs(p.a) + std::abs(p.b)))) {
      done.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    const Panel l = make(p.a, mid, p.depth + 1), r = make(mid, p.b, p.depth + 1);
    total.add(l.value + r.value - p.value);
    err_total.add(l.error + r.error - p.error);
    open.push(l);
    open.push(r);
  }
  CompensatedSum v, e;
  for (; !open.empty(); open.pop()) {
    v.add(open.top().value);
    e.add(open.top().error);
  }
  for (const auto& p : done) {
    v.add(p.value);
    e.add(p.error);
  }
  if (error) *error = e.value();
  return v.value();
}

std::vector<double> panel_edges(double a, double b,
                                std::span<const double> breakpoints,
                                double max_ratio) {
  std::vector<double> pts{a, b};
  for (double p : breakpoints)
    if (p > a && p < b) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (!(a > 0.0) || !(max_ratio > 1.0)) return pts;
  std::vector<double> out{pts.front()};
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double lo = pts[k], hi = pts[k + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(
                                       std::log(hi / lo) / std::log(max_ratio) - 1e-12)));
    for (int j = 1; j < pieces; ++j)
      out.push_back(lo * std::pow(hi / lo, static_cast<double>(j) / pieces));
    out.push_back(hi);
  }
  return out;
}

TailIntegral log_tail(const std::function<double(double)>& f, double a,
                      double rel_tol, double max_w, int n) {
  TailIntegral out;
  CompensatedSum sum;
  double prev = 0.0, last = 0.0;
  int quiet = 0;
  for (double w = 0.0; w < max_w; w += 1.0) {
    const double piece = gauss(
        [&](double u) {
          const double x = a * std::exp(u);
          return f(x) * x;
        },
        w, w + 1.0, n);
    sum.add(piece);
    prev = last;
    last = piece;
    const double total = std::abs(sum.value());
    if (std::abs(piece) <= rel_tol * total || (total == 0.0 && piece == 0.0 && w >= 4.0)) {
      if (++quiet >= 2) {
        out.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (prev != 0.0) {
    const double q = last / prev;
    if (q > 0.0 && q < 1.0) out.remainder = last * q / (1.0 - q);
  }
  out.value = sum.value() + out.remainder;
  return out;
}

NodeSet composite_nodes(std::span<const double> edges, int n) {
  NodeSet set;
  const auto& rule = gauss_legendre(n);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k], b = edges[k + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
      set.x.push_back(mid + half * rule.nodes[i]);
      set.w.push_back(half * rule.weights[i]);
    }
  }
  return set;
}

}  // namespace ofrac::quad
