#include <doctest.h>

#include <cmath>
#include <random>

#include "ofrac/frac_operator.hpp"
#include "ofrac/infconv.hpp"
#include "ofrac/orlicz.hpp"
#include "ofrac/solutions.hpp"

using namespace ofrac;

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

  YoungSpec young() {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: return YoungSpec::power(uniform(1.2, 5.0));
      case 1: return YoungSpec::power_log(uniform(2.7, 5.0));
      default: return YoungSpec::piecewise_power(uniform(1.2, 3.0), uniform(1.2, 5.0), uniform(0.5, 2.0));
    }
  }

  SampledFunction bump() {
    return make_generator("bump", {{"center", uniform(-0.3, 0.3)},
                                   {"radius", uniform(0.3, 0.7)},
                                   {"height", uniform(-2.0, 2.0)}});
  }
};

SampledFunction reflected(const SampledFunction& u) {
  std::vector<double> bps;
  for (double b : u.breakpoints()) bps.push_back(-b);
  return SampledFunction::closed_form("reflected", [u](double x) { return u(-x); },
                                      u.core_half_width(), TailModel::zero(), bps);
}

}  // namespace

TEST_CASE("growth index envelopes") {
  Gen gen(11);
  for (int k = 0; k < 40; ++k) {
    const auto Y = make_young(gen.young());
    for (int j = 0; j < 25; ++j) {
      const double t = gen.log_uniform(1e-4, 1e4), lam = gen.log_uniform(1e-3, 1e3);
      const double ratio = Y.G(lam * t) / Y.G(t);
      CAPTURE(Y.describe());
      CHECK(ratio >= xi_minus(Y, lam) * (1 - 1e-9));
      CHECK(ratio <= xi_plus(Y, lam) * (1 + 1e-9));
    }
  }
}

TEST_CASE("g is nondecreasing and Young's inequality holds") {
  Gen gen(12);
  for (int k = 0; k < 30; ++k) {
    const auto Y = make_young(gen.young());
    for (int j = 0; j < 20; ++j) {
      const double t1 = gen.log_uniform(1e-4, 1e4), t2 = gen.log_uniform(1e-4, 1e4);
      CHECK((Y.g(std::min(t1, t2)) <= Y.g(std::max(t1, t2))));
      const double a = gen.log_uniform(1e-3, 1e3);
      CHECK(a * t1 <= (Y.G(t1) + complementary(Y, a).value) * (1 + 1e-10));
    }
  }
}

TEST_CASE("complementary function is convex and inverts") {
  Gen gen(13);
  for (int k = 0; k < 30; ++k) {
    const auto Y = make_young(gen.young());
    const double a = gen.log_uniform(1e-3, 1e3), b = gen.log_uniform(1e-3, 1e3);
    const double mid = complementary(Y, 0.5 * (a + b)).value;
    CHECK(mid <= 0.5 * (complementary(Y, a).value + complementary(Y, b).value) * (1 + 1e-9));
    const double v = complementary(Y, a).value;
    CHECK(complementary_inverse(Y, v) == doctest::Approx(a).epsilon(1e-8));
  }
}

TEST_CASE("modular is increasing in the amplitude") {
  Gen gen(14);
  const Domain1D dom{-1.0, 1.0, 8, 16};
  for (int k = 0; k < 10; ++k) {
    const auto Y = make_young(gen.young());
    const auto u = gen.bump();
    const double l1 = gen.uniform(0.1, 2.0), l2 = l1 * gen.uniform(1.01, 3.0);
    CHECK(modular_G(u.scaled(l1), dom, Y).value <= modular_G(u.scaled(l2), dom, Y).value);
    CHECK(modular_sG(u.scaled(l1), dom, Y, 0.5).value <= modular_sG(u.scaled(l2), dom, Y, 0.5).value);
  }
}

TEST_CASE("seminorm modular is even and reflection invariant") {
  Gen gen(15);
  const Domain1D dom{-1.0, 1.0, 8, 16};
  for (int k = 0; k < 6; ++k) {
    const auto Y = make_young(gen.young());
    const auto u = gen.bump();
    const double s = gen.uniform(0.2, 0.8);
    const double base = modular_sG(u, dom, Y, s).value;
    CHECK(modular_sG(u.scaled(-1.0), dom, Y, s).value == doctest::Approx(base).epsilon(1e-10));
    CHECK(modular_sG(reflected(u), dom, Y, s).value == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("Luxemburg norm is absolutely homogeneous") {
  Gen gen(16);
  const Domain1D dom{-1.0, 1.0, 8, 16};
  for (int k = 0; k < 8; ++k) {
    const auto Y = make_young(gen.young());
    const auto u = gen.bump();
    const double c = gen.uniform(-3.0, 3.0);
    const double n1 = luxemburg_norm(u, dom, Y, NormKind::LG).lambda;
    CHECK(luxemburg_norm(u.scaled(c), dom, Y, NormKind::LG).lambda ==
          doctest::Approx(std::abs(c) * n1).epsilon(1e-8));
  }
}

TEST_CASE("operator is odd and commutes with reflection") {
  Gen gen(17);
  for (int k = 0; k < 8; ++k) {
    auto spec = gen.young();
    // Stay in the nondegenerate regime so every x is admissible.
    if (spec.family == YoungFamily::PiecewisePower) spec.p = std::max(spec.p, 1.6);
    const auto Y = make_young(spec);
    const auto u = gen.bump();
    const double x = gen.uniform(-0.5, 0.5);
    const double base = eval_pv_glaplacian(u, x, Y, 0.5).value;
    const double tol = 1e-5 * std::max(1.0, std::abs(base));
    CHECK(std::abs(eval_pv_glaplacian(u.scaled(-1.0), x, Y, 0.5).value + base) <= tol);
    CHECK(std::abs(eval_pv_glaplacian(reflected(u), -x, Y, 0.5).value - base) <= tol);
  }
}

TEST_CASE("infimal convolution lies between inf u and u") {
  Gen gen(18);
  for (int k = 0; k < 10; ++k) {
    const auto u = gen.bump();
    const double eps = gen.log_uniform(0.01, 0.5);
    std::vector<double> nodes;
    for (int i = 0; i < 9; ++i) nodes.push_back(-1.0 + 0.25 * i);
    const auto r = inf_convolve(u, make_infconv_params(u, eps, 2.0), nodes);
    double lo = 0.0;
    for (int i = 0; i <= 2000; ++i) lo = std::min(lo, u(-1.0 + i / 1000.0));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      CHECK(r.values[i] <= u(nodes[i]) + 1e-12);
      CHECK(r.values[i] >= lo);
    }
  }
}

TEST_CASE("comparison report agrees with the nodewise definition") {
  Gen gen(19);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> a(20), b(20);
    double worst = -INFINITY;
    for (int i = 0; i < 20; ++i) {
      a[i] = gen.uniform(-1.0, 1.0);
      b[i] = a[i] + gen.uniform(-1e-6, 1.0);
      worst = std::max(worst, a[i] - b[i]);
    }
    const auto r = comparison_report(a, b, 1e-8);
    CHECK(r.passed == (worst <= 1e-8));
    CHECK(r.achieved_constant == worst);
  }
}
