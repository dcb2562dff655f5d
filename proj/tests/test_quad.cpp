#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "critlab/errors.hpp"
#include "critlab/quad.hpp"

using namespace critlab;
using quad::integrate;
using quad::integrate_split;
using quad::QuadratureSpec;

TEST_CASE("polynomials on finite intervals are exact") {
  auto r = integrate([](double t) { return t * t * t; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.error_estimate <= 1e-14);
  CHECK(r.panels == 1);

  auto s = integrate([](double t) { return 3.0 * t * t - 2.0 * t + 1.0; }, -1.0, 2.0);
  CHECK(s.value == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("semi-infinite tail: Beta-function oracle") {
  // int_0^inf r^2 (1+r)^-4 dr = B(3,1) = Gamma(3)Gamma(1)/Gamma(4) = 1/3.
  const double oracle = std::tgamma(3.0) * std::tgamma(1.0) / std::tgamma(4.0);
  auto r = integrate([](double t) { return t * t * std::pow(1.0 + t, -4.0); }, 0.0,
                     std::numeric_limits<double>::infinity());
  CHECK(r.value == doctest::Approx(oracle).epsilon(1e-12));

  // int_0^inf e^{-r^2} dr = sqrt(pi)/2.
  auto g = integrate([](double t) { return std::exp(-t * t); }, 0.0,
                     std::numeric_limits<double>::infinity());
  CHECK(g.value == doctest::Approx(0.8862269254527579).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity") {
  auto r = integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("interior kink handled by split points") {
  // int_0^2 |t - 1| dt = 1, kink declared.
  const double splits[] = {1.0};
  auto r = integrate_split([](double t) { return std::fabs(t - 1.0); }, 0.0, 2.0, splits);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
  // Same integral with the kink undeclared still converges.
  auto s = integrate([](double t) { return std::fabs(t - 1.0); }, 0.0, 2.0);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero integrand and empty interval") {
  auto r = integrate([](double) { return 0.0; }, 0.0, 5.0);
  CHECK(r.value == 0.0);
  auto s = integrate([](double t) { return t; }, 2.0, 2.0);
  CHECK(s.value == 0.0);
}

TEST_CASE("error contract: reported estimate bounds the true error") {
  // int_0^3 t sin(5t) dt = (sin 15 - 15 cos 15)/25.
  auto r = integrate([](double t) { return std::sin(5.0 * t) * t; }, 0.0, 3.0);
  const double exact = (std::sin(15.0) - 15.0 * std::cos(15.0)) / 25.0;
  CHECK(std::fabs(r.value - exact) <= std::max(1e-14, 1e-10 * std::fabs(exact)) + r.error_estimate);
  CHECK(r.error_estimate <= std::max(1e-14, 1e-10 * std::fabs(r.value)));
}

TEST_CASE("budget exhaustion raises NonConvergence with best estimate") {
  QuadratureSpec tiny;
  tiny.max_subdivisions = 4;
  bool threw = false;
  try {
    integrate([](double t) { return 1.0 / std::sqrt(std::fabs(t - 0.3711)); }, 0.0, 1.0, tiny);
  } catch (const NonConvergence& e) {
    threw = true;
    CHECK(std::isfinite(e.value));
    CHECK(e.error_estimate > 0.0);
  }
  CHECK(threw);
}

TEST_CASE("non-finite integrand values are refused") {
  CHECK_THROWS_AS(
      integrate([](double) { return std::numeric_limits<double>::infinity(); }, 0.0, 1.0),
      NonFinite);
  CHECK_THROWS_AS(
      integrate([](double t) { return t < 0.5 ? 0.0 : std::nan(""); }, 0.0, 1.0), NonFinite);
}

TEST_CASE("invalid limits are refused") {
  CHECK_THROWS_AS(integrate([](double t) { return t; }, 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(integrate([](double t) { return t; },
                            std::numeric_limits<double>::infinity(), 1.0),
                  InvalidInput);
}

TEST_CASE("determinism: repeated runs give identical bits") {
  auto f = [](double t) { return std::exp(-t) * std::cos(7.0 * t); };
  auto a = integrate(f, 0.0, std::numeric_limits<double>::infinity());
  auto b = integrate(f, 0.0, std::numeric_limits<double>::infinity());
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.panels == b.panels);
}

// --- tail classification ---------------------------------------------------

namespace {

std::pair<std::vector<double>, std::vector<double>> dyadic_samples(
    double t0, int count, double (*f)(double)) {
  std::vector<double> t(count), y(count);
  for (int i = 0; i < count; ++i) {
    t[i] = std::ldexp(t0, -i);
    y[i] = f(t[i]);
  }
  return {t, y};
}

}  // namespace

TEST_CASE("tail exponent of an exact power is exact") {
  auto [t, y] = dyadic_samples(1.0, 16, +[](double x) { return x * x * x * x; });
  auto fit = quad::classify_tail(t, y);
  CHECK(fit.exponent == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(fit.band <= 1e-12);
}

TEST_CASE("tail exponent of a constant is zero") {
  auto [t, y] = dyadic_samples(0.5, 12, +[](double) { return 2.5; });
  auto fit = quad::classify_tail(t, y);
  CHECK(fit.exponent == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(fit.band <= 1e-13);
}

TEST_CASE("log-corrected power: estimate approaches the power from above") {
  // f = t^3 |ln t|^-2 has local dyadic slope 3 + 2/|ln t| -> 3^+.
  auto f = +[](double x) { return std::pow(x, 3.0) * std::pow(-std::log(x), -2.0); };
  auto [t16, y16] = dyadic_samples(std::exp(-1.0), 16, f);
  auto fit16 = quad::classify_tail(t16, y16);
  auto [t32, y32] = dyadic_samples(std::exp(-1.0), 32, f);
  auto fit32 = quad::classify_tail(t32, y32);
  CHECK(fit16.exponent > 3.0);
  CHECK(fit32.exponent > 3.0);
  CHECK(std::fabs(fit32.exponent - 3.0) < std::fabs(fit16.exponent - 3.0));
  CHECK(fit32.band < fit16.band);
  CHECK(fit16.exponent == doctest::Approx(3.0).epsilon(0.15));
}

TEST_CASE("tail classification input validation") {
  std::vector<double> t{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  std::vector<double> pos(t.size(), 1.0);
  std::vector<double> with_zero = pos;
  with_zero[4] = 0.0;
  CHECK_THROWS_AS(quad::classify_tail(t, with_zero), ZeroSamples);
  std::vector<double> short_t(t.begin(), t.begin() + 5);
  std::vector<double> short_f(pos.begin(), pos.begin() + 5);
  CHECK_THROWS_AS(quad::classify_tail(short_t, short_f), InvalidInput);
  std::vector<double> not_dec = t;
  std::swap(not_dec[2], not_dec[3]);
  CHECK_THROWS_AS(quad::classify_tail(not_dec, pos), InvalidInput);
}
