#include <doctest.h>

#include <cmath>

#include "ofrac/errors.hpp"
#include "ofrac/orlicz.hpp"
#include "oracles.hpp"

using namespace ofrac;

namespace {

SampledFunction fn(const std::string& name, std::map<std::string, double> params = {}) {
  return make_generator(name, params);
}

const Domain1D unit{0.0, 1.0};

}  // namespace

TEST_CASE("modular_G closed forms") {
  const auto Y = make_young(YoungSpec::power(2.0));
  CHECK(modular_G(fn("constant", {{"c", 0.0}}), unit, Y).value == 0.0);
  CHECK(modular_G(fn("constant"), unit, Y).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(modular_G(fn("linear"), unit, Y).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("modular_G scales like 2^p for powers") {
  for (double p : {1.5, 3.0}) {
    const auto Y = make_young(YoungSpec::power(p));
    const auto u = fn("bump", {{"radius", 0.4}, {"center", 0.5}});
    const Domain1D dom{0.0, 1.0, 8, 32};
    const double m1 = modular_G(u, dom, Y).value;
    const double m2 = modular_G(u.scaled(2.0), dom, Y).value;
    CHECK(m2 == doctest::Approx(std::pow(2.0, p) * m1).epsilon(1e-10));
  }
}

TEST_CASE("modular_sG of x on the unit square") {
  // G(|x - y|^{3/4}) / |x - y| = |x - y|^{1/2}, whose integral is 8/15.
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto r = modular_sG(fn("linear"), unit, Y, 0.25);
  CHECK(r.value == doctest::Approx(8.0 / 15.0).epsilon(1e-6));
  CHECK(oracle::modular_sG(fn("linear"), Y, 0.25, 0.0, 1.0, 2000) ==
        doctest::Approx(8.0 / 15.0).epsilon(1e-2));
}

TEST_CASE("modular_sG matches the dense-grid oracle") {
  const auto Y = make_young(YoungSpec::power(3.0));
  const auto u = fn("truncated_parabola_s", {{"s", 0.75}});
  const Domain1D dom{-1.5, 1.5, 8, 16};
  const double lib = modular_sG(u, dom, Y, 0.5).value;
  const double ref = oracle::modular_sG(u, Y, 0.5, -1.5, 1.5, 2000);
  CHECK(lib == doctest::Approx(ref).epsilon(1e-2));
}

TEST_CASE("modular_sG is invariant under adding constants and scales like 2^p") {
  const auto Y = make_young(YoungSpec::power(2.0));
  const auto u = fn("bump", {{"radius", 0.5}, {"center", 0.5}});
  const double base = modular_sG(u, unit, Y, 0.5).value;
  const auto shifted = SampledFunction::closed_form(
      "bump+3", [&](double x) { return u(x) + 3.0; }, 4.0, TailModel::constant(3.0),
      {0.0, 1.0});
  CHECK(modular_sG(shifted, unit, Y, 0.5).value == doctest::Approx(base).epsilon(1e-8));
  CHECK(modular_sG(u.scaled(2.0), unit, Y, 0.5).value == doctest::Approx(4.0 * base).epsilon(1e-8));
}

TEST_CASE("Luxemburg norms") {
  SUBCASE("constant one has norm one for any normalized G") {
    for (const auto& spec : {YoungSpec::power(2.0), YoungSpec::power_log(3.0),
                             YoungSpec::piecewise_power(1.5, 3.0)}) {
      const auto r = luxemburg_norm(fn("constant"), unit, make_young(spec), NormKind::LG);
      CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("power norm of x is the L^p norm") {
    const auto r = luxemburg_norm(fn("linear"), unit, make_young(YoungSpec::power(3.0)), NormKind::LG);
    CHECK(r.lambda == doctest::Approx(std::pow(0.25, 1.0 / 3.0)).epsilon(1e-8));
    CHECK(std::abs(r.modular_at_lambda - 1.0) <= 1e-6);
  }
  SUBCASE("zero function") {
    const auto r = luxemburg_norm(fn("constant", {{"c", 0.0}}), unit,
                                  make_young(YoungSpec::power(2.0)), NormKind::LG);
    CHECK(r.lambda == 0.0);
  }
}

TEST_CASE("norm-modular sandwich") {
  const auto Y = make_young(YoungSpec::piecewise_power(1.5, 3.0));
  for (double h : {0.1, 1.0, 10.0}) {
    const auto u = fn("bump", {{"center", 0.5}, {"radius", 0.5}, {"height", h}});
    for (auto kind : {NormKind::LG, NormKind::SeminormSG}) {
      const auto r = luxemburg_norm(u, unit, Y, kind, 0.5);
      CHECK(xi_minus(Y, r.lambda) <= r.modular * (1 + 1e-6));
      CHECK(r.modular <= xi_plus(Y, r.lambda) * (1 + 1e-6));
    }
  }
}

TEST_CASE("xi envelopes") {
  const auto Y = make_young(YoungSpec::piecewise_power(1.5, 3.0));
  CHECK(xi_minus(Y, 2.0) == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(xi_plus(Y, 2.0) == doctest::Approx(8.0));
  CHECK(xi_minus(Y, 0.5) == doctest::Approx(0.125));
  CHECK(xi_plus(Y, 0.5) == doctest::Approx(std::pow(0.5, 1.5)));
}

TEST_CASE("L_g membership of the constant one") {
  // 2 * int_0^inf g(1 / (1 + x^s)) / (1 + x^{1+s}) dx with g(t) = 2t, s = 1/2;
  // [1, inf) is mapped to (0, 1] by x = 1/w.
  const double s = 0.5;
  auto f = [s](double x) { return 2.0 / (1.0 + std::pow(x, s)) / (1.0 + std::pow(x, 1.0 + s)); };
  const double ref = 2.0 * (oracle::line(f, 0.0, 1.0, 4000) +
                            oracle::line([&](double w) { return w > 0 ? f(1.0 / w) / (w * w) : 2.0; },
                                         0.0, 1.0, 4000));
  const auto r = lg_membership(fn("constant"), make_young(YoungSpec::power(2.0)), s);
  CHECK(r.value == doctest::Approx(ref).epsilon(1e-6));
  CHECK(r.core + r.tail == doctest::Approx(r.value).epsilon(1e-14));
}

TEST_CASE("L_g membership of zero and of a growing function") {
  const auto Y3 = make_young(YoungSpec::power(3.0));
  CHECK(lg_membership(fn("constant", {{"c", 0.0}}), Y3, 0.5).value == 0.0);
  CHECK_THROWS_AS(lg_membership(fn("linear"), Y3, 0.5), TailDivergence);
  // Bounded data always converge: the weight alone is integrable.
  CHECK(std::isfinite(lg_membership(fn("bump"), Y3, 0.5).value));
}
