#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

void Sum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

namespace {

// Half panel [e, e + d] (d may be negative) with t = e + d w^2, w in [0, 1].
double half_panel(const std::function<double(double)>& f, double e, double d, int n) {
  Sum acc;
  for (int k = 1; k <= n; ++k) {
    const double w = static_cast<double>(k) / n;
    const double weight = k == n ? 0.5 : 1.0;
    acc.add(weight * f(e + d * w * w) * 2.0 * std::abs(d) * w);
  }
  return acc.value() / n;  // w = 0 contributes 0
}

double trapezoid_sub(const std::function<double(double)>& f, double a, double b, int n) {
  const double m = 0.5 * (a + b);
  return half_panel(f, a, m - a, n) + half_panel(f, b, m - b, n);
}

}  // namespace

double line(const std::function<double(double)>& f, double a, double b, int n) {
  if (!(b > a)) return 0.0;
  const double fine = trapezoid_sub(f, a, b, n);
  const double coarse = trapezoid_sub(f, a, b, n / 2);
  return (4.0 * fine - coarse) / 3.0;
}

double square(const std::function<double(double, double)>& F, double a, double b, int n) {
  const double h = (b - a) / (n - 1);
  Sum acc;
  for (int i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    const double x = a + h * i;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      acc.add(wi * wj * F(x, a + h * j));
    }
  }
  return acc.value() * h * h;
}

namespace {

double split_line(const std::function<double(double)>& f, double T, std::vector<double> kinks,
                  int n) {
  kinks.push_back(0.0);
  kinks.push_back(T);
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  Sum acc;
  for (std::size_t k = 0; k + 1 < kinks.size(); ++k) {
    if (kinks[k] < 0.0 || kinks[k + 1] > T) continue;
    acc.add(line(f, kinks[k], kinks[k + 1], n));
  }
  return acc.value();
}

}  // namespace

double pv_paired(const ofrac::SampledFunction& u, double x, const ofrac::YoungFunction& Y,
                 double s, double T, std::vector<double> kinks, int n) {
  const double ux = u(x);
  auto f = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double ts = std::pow(t, s);
    return (Y.g((ux - u(x + t)) / ts) + Y.g((ux - u(x - t)) / ts)) * std::pow(t, -1.0 - s);
  };
  return split_line(f, T, std::move(kinks), n);
}

double g_gradient(const ofrac::SampledFunction& u, double x, const ofrac::YoungFunction& Y,
                  double s, double T, std::vector<double> kinks, int n) {
  const double ux = u(x);
  auto f = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double ts = std::pow(t, s);
    return (Y.G(std::abs(ux - u(x + t)) / ts) + Y.G(std::abs(ux - u(x - t)) / ts)) / t;
  };
  return split_line(f, T, std::move(kinks), n);
}

double modular_sG(const ofrac::SampledFunction& u, const ofrac::YoungFunction& Y, double s,
                  double a, double b, int n) {
  return square(
      [&](double x, double y) {
        const double r = std::abs(x - y);
        return Y.G(std::abs(u(x) - u(y)) / std::pow(r, s)) / r;
      },
      a, b, n);
}

double weak_lhs_power(const ofrac::SampledFunction& u, const std::function<double(double)>& psi,
                      double lo, double hi, double L, double p, double s, int n) {
  auto gp = [p](double t) { return p * std::pow(std::abs(t), p - 1.0) * (t < 0 ? -1.0 : 1.0); };
  const double inner = square(
      [&](double x, double y) {
        const double r = std::abs(x - y);
        return gp((u(x) - u(y)) / std::pow(r, s)) * (psi(x) - psi(y)) / std::pow(r, 1.0 + s);
      },
      lo, hi, n);

  // Exterior: int_K psi(x) E(x), E over y outside K.
  const int nx = n / 2, nt = 4 * n;
  const double hx = (hi - lo) / nx;
  Sum ext;
  for (int i = 0; i < nx; ++i) {
    const double x = lo + hx * (i + 0.5);
    const double px = psi(x);
    if (px == 0.0) continue;
    const double ux = u(x);
    auto side = [&](double d0, double d1, int sign) {
      // y = x + sign t, t in [d0, d1], uniform in log t (midpoints).
      if (!(d1 > d0)) return 0.0;
      const double l0 = std::log(d0), l1 = std::log(d1), hl = (l1 - l0) / nt;
      Sum acc;
      for (int k = 0; k < nt; ++k) {
        const double t = std::exp(l0 + hl * (k + 0.5));
        acc.add(gp((ux - u(x + sign * t)) / std::pow(t, s)) * std::pow(t, -1.0 - s) * t);
      }
      return acc.value() * hl;
    };
    double E = side(hi - x, L - x, +1) + side(x - lo, x + L, -1);
    // Beyond L, u = 0: g(ux / t^s) t^{-1-s} integrates to gp(ux) t^{-sp}/(sp).
    E += gp(ux) * (std::pow(L - x, -s * p) + std::pow(x + L, -s * p)) / (s * p);
    ext.add(px * E * hx);
  }
  return 0.5 * inner + ext.value();
}

double aitken(double s1, double s2, double s3) {
  const double d1 = s2 - s1, d2 = s3 - s2;
  if (d1 == d2 || std::abs(d2) >= std::abs(d1) || d1 * d2 < 0.0) return s3;
  return s3 - d2 * d2 / (d2 - d1);
}

}  // namespace oracle
