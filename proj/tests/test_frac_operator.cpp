#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ofrac/errors.hpp"
#include "ofrac/frac_operator.hpp"
#include "oracles.hpp"

using namespace ofrac;

namespace {

const std::vector<double> kRhos{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

// (1 - (lambda x)^2)_+^{1/2}.
SampledFunction dilated_parabola(double lambda) {
  return SampledFunction::closed_form(
      "parabola", [lambda](double x) { return std::sqrt(std::max(0.0, 1.0 - lambda * lambda * x * x)); },
      2.0 / lambda, TailModel::zero(), {-1.0 / lambda, 1.0 / lambda});
}

// Oracle PV for u supported in [-1, 1] and G = t^p, adding the exact tail
// beyond T = 4 where both u(x + t) and u(x - t) vanish.
double oracle_pv_power(const SampledFunction& u, double x, double p, double s) {
  const auto Y = make_young(YoungSpec::power(p));
  const double T = 4.0;
  const double body = oracle::pv_paired(u, x, Y, s, T, {1.0 - x, 1.0 + x}, 4000);
  const double ux = u(x);
  const double tail = 2.0 * p * std::pow(std::abs(ux), p - 1.0) * (ux < 0 ? -1.0 : 1.0) *
                      std::pow(T, -s * p) / (s * p);
  return body + tail;
}

}  // namespace

TEST_CASE("linear and constant functions are annihilated") {
  const auto Y = make_young(YoungSpec::power(3.0));
  for (double x : {-1.0, 0.0, 0.7}) {
    CHECK(std::abs(eval_pv_glaplacian(make_generator("linear", {{"slope", 2.0}}), x, Y, 0.5).value) < 1e-8);
    CHECK(eval_pv_glaplacian(make_generator("constant", {{"c", 3.0}}), x, Y, 0.5).value == 0.0);
  }
}

TEST_CASE("square-root parabola has constant PV 2 pi for t^2, s = 1/2") {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = make_generator("truncated_parabola_s", {{"s", 0.5}});
  for (double x : {0.0, 0.3, -0.3, 0.6, -0.6}) {
    const double lib = eval_pv_glaplacian(u, x, Y, 0.5).value;
    const double ref = oracle_pv_power(u, x, 2.0, 0.5);
    CHECK(ref == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-4));
    CHECK(lib == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-5));
  }
}

TEST_CASE("PV matches the oracle for t^3") {
  const auto Y = make_young(YoungSpec::power(3.0));
  const auto u = make_generator("truncated_parabola_s", {{"s", 0.5}});
  for (double x : {0.0, 0.45}) {
    const double lib = eval_pv_glaplacian(u, x, Y, 0.5).value;
    CHECK(lib == doctest::Approx(oracle_pv_power(u, x, 3.0, 0.5)).epsilon(1e-3));
  }
}

TEST_CASE("PV scaling, translation and homogeneity for powers") {
  const double s = 0.5;
  for (double p : {2.0, 3.0}) {
    const auto Y = make_young(YoungSpec::power(p));
    const auto u = dilated_parabola(1.0);
    const double x = 0.2;
    const double base = eval_pv_glaplacian(u, x, Y, s).value;
    SUBCASE("dilation") {
      const double lambda = 2.0;
      const double scaled = eval_pv_glaplacian(dilated_parabola(lambda), x / lambda, Y, s).value;
      CHECK(scaled == doctest::Approx(std::pow(lambda, s * p) * base).epsilon(2e-5));
    }
    SUBCASE("translation") {
      CHECK(eval_pv_glaplacian(u.shifted(0.37), x + 0.37, Y, s).value ==
            doctest::Approx(base).epsilon(2e-5));
    }
    SUBCASE("homogeneity") {
      CHECK(eval_pv_glaplacian(u.scaled(3.0), x, Y, s).value ==
            doctest::Approx(std::pow(3.0, p - 1.0) * base).epsilon(2e-5));
    }
  }
}

TEST_CASE("touching from above lowers the operator") {
  const auto Y = make_young(YoungSpec::piecewise_power(1.5, 3.0));
  const auto u = make_generator("bump");
  const double x0 = 0.25;
  const auto v = SampledFunction::closed_form(
      "bump+", [&](double x) { return u(x) + 0.2 * (1.0 - bump_value(x, x0, 0.5)); }, 4.0,
      TailModel::constant(0.2), {-1.0, 1.0, x0 - 0.5, x0 + 0.5});
  CHECK(eval_pv_glaplacian(v, x0, Y, 0.5).value < eval_pv_glaplacian(u, x0, Y, 0.5).value);
}

TEST_CASE("inner decay slopes") {
  SUBCASE("t^3, s = 1/2, x^2 at the origin") {
    const auto r = inner_decay_probe(make_generator("quadratic"), 0.0,
                                     make_young(YoungSpec::power(3.0)), 0.5, kRhos);
    CHECK(r.target == doctest::Approx(2.5));
    CHECK(r.slope == doctest::Approx(2.5).epsilon(0.04));
  }
  SUBCASE("t^4, s = 1/4") {
    const auto r = inner_decay_probe(make_generator("quadratic"), 0.0,
                                     make_young(YoungSpec::power(4.0)), 0.25, kRhos);
    CHECK(r.target == doctest::Approx(5.0));
    CHECK(std::abs(r.slope - 5.0) <= 0.1);
  }
  SUBCASE("t^2, s = 1/2, |x|^3 with beta = 3") {
    const auto u = SampledFunction::closed_form(
        "cube", [](double x) { return std::abs(x * x * x); }, 2.0, TailModel::decay(1.0, -3.0), {0.0});
    const auto r = inner_decay_probe(u, 0.0, make_young(YoungSpec::power(2.0)), 0.5, kRhos, 3.0);
    CHECK(r.target == doctest::Approx(2.0));
    CHECK(std::abs(r.slope - 2.0) <= 0.1);
  }
}

TEST_CASE("probe needs two decades") {
  const auto Y = make_young(YoungSpec::power(3.0));
  const auto u = make_generator("quadratic");
  CHECK_THROWS_AS(inner_decay_probe(u, 0.0, Y, 0.5, {1e-2, 5e-3, 2e-3}), InsufficientDecades);
  CHECK_THROWS_AS(inner_decay_probe(u, 0.0, Y, 0.5, {1e-2}), InsufficientDecades);
}

TEST_CASE("g-gradient of a bump matches the oracle") {
  const double s = 0.25;
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = make_generator("bump");
  for (double x : {0.0, 0.3, -0.7}) {
    // Beyond T = 4 only u(x) remains: 2 u(x)^2 int_T^inf t^{-1-2s} dt.
    const double T = 4.0, ux = u(x);
    const double ref = oracle::g_gradient(u, x, Y, s, T, {1.0 - x, 1.0 + x}, 4000) +
                       2.0 * ux * ux * std::pow(T, -2.0 * s) / (2.0 * s);
    CHECK(eval_g_gradient(u, x, Y, s) == doctest::Approx(ref).epsilon(1e-2));
  }
}

TEST_CASE("g-gradient is zero for constants and positive otherwise") {
  const auto Y = make_young(YoungSpec::power(3.0));
  CHECK(eval_g_gradient(make_generator("constant"), 0.0, Y, 0.5) == 0.0);
  CHECK(eval_g_gradient(make_generator("bump"), 0.5, Y, 0.5) > 0.0);
}

TEST_CASE("regularized PV converges as rho_reg shrinks") {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = make_generator("truncated_parabola_s", {{"s", 0.5}});
  const double exact = 2.0 * std::numbers::pi;
  double prev = std::numeric_limits<double>::infinity();
  for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double err = std::abs(eval_pv_regularized(u, 0.1, Y, 0.5, r) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 2e-2 * exact);
}

TEST_CASE("far-field envelope bounds the far field") {
  const auto u = make_generator("bump");
  for (const auto& spec : {YoungSpec::power(2.0), YoungSpec::piecewise_power(1.5, 3.0)}) {
    const auto Y = make_young(spec);
    for (double rho : {0.5, 0.1, 0.01}) {
      const auto b = pv_tail_envelope(u, 0.2, Y, 0.5, rho);
      CHECK(b.far_field <= b.envelope);
    }
  }
}

TEST_CASE("invalid s and configuration are rejected") {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = make_generator("bump");
  CHECK_THROWS_AS(eval_pv_glaplacian(u, 0.0, Y, 1.0), ValidationError);
  CHECK_THROWS_AS(eval_pv_glaplacian(u, 0.0, Y, 0.0), ValidationError);
  QuadratureConfig bad;
  bad.rho_split = -1.0;
  CHECK_THROWS_AS(eval_pv_glaplacian(u, 0.0, Y, 0.5, bad), ValidationError);
}
