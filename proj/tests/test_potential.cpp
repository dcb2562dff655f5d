#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "critlab/errors.hpp"
#include "critlab/potential.hpp"

using namespace critlab;
using potential::RadialMeasure;

namespace {
const ProblemParams kP32(3, 2.0);
const ProblemParams kP43(4, 3.0);
}  // namespace

TEST_CASE("total mass of stock measures against closed forms") {
  // Unit indicator in n = 3: 4 pi / 3.
  const RadialMeasure ind(Forcing::indicator(1.0), kP32);
  CHECK(potential::total_mass(ind) == doctest::Approx(4.1887902047863905).epsilon(1e-12));
  // (1+r)^{-4} shells integrate to 1/3 as well: same mass.
  const RadialMeasure pt(Forcing::power_tail(4.0), kP32);
  CHECK(potential::total_mass(pt) == doctest::Approx(4.1887902047863905).epsilon(1e-10));
  // n = 4 indicator: 2 pi^2 / 4.
  const RadialMeasure i4(Forcing::indicator(1.0), kP43);
  CHECK(potential::total_mass(i4) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-12));
  // Slow tail in n = 4: 2 pi^2 * 32/35.
  const RadialMeasure s4(Forcing::power_tail(4.5), kP43);
  CHECK(potential::total_mass(s4) ==
        doctest::Approx(2.0 * M_PI * M_PI * 32.0 / 35.0).epsilon(1e-8));

  // beta = n: logarithmically divergent mass is refused.
  CHECK_THROWS_AS(RadialMeasure(Forcing::power_tail(4.0), kP43), DivergentMass);
}

TEST_CASE("ball measure: containment, separation and centered balls") {
  const RadialMeasure m(Forcing::indicator(1.0), kP32);
  // Centered balls grow like the covered volume.
  CHECK(potential::ball_measure(m, 0.0, 0.5) == doctest::Approx(M_PI / 6.0).epsilon(1e-12));
  CHECK(potential::ball_measure(m, 0.0, 1.0) ==
        doctest::Approx(4.1887902047863905).epsilon(1e-12));
  CHECK(potential::ball_measure(m, 0.0, 7.0) ==
        doctest::Approx(4.1887902047863905).epsilon(1e-12));
  // Ball strictly inside the support sees exactly its own volume.
  CHECK(potential::ball_measure(m, 0.5, 0.25) ==
        doctest::Approx(4.0 * M_PI / 3.0 * std::pow(0.25, 3.0)).epsilon(1e-10));
  // Separated: distance exceeds the sum of the radii.
  CHECK(potential::ball_measure(m, 5.0, 1.0) == 0.0);
  // Swallowing: the ball contains the whole support.
  CHECK(potential::ball_measure(m, 0.5, 3.0) ==
        doctest::Approx(4.1887902047863905).epsilon(1e-12));

  CHECK_THROWS_AS(potential::ball_measure(m, 0.0, -1.0), InvalidInput);
  CHECK_THROWS_AS(potential::ball_measure(m, -1.0, 1.0), InvalidInput);
}

TEST_CASE("ball measure reproduces sphere-sphere lens volumes") {
  const RadialMeasure m(Forcing::indicator(1.0), kP32);
  // Equal unit spheres at distance 1: lens volume 5 pi / 12.
  CHECK(potential::ball_measure(m, 1.0, 1.0) ==
        doctest::Approx(1.3089969389957472).epsilon(1e-10));
  // Radii 1 and 1/2 at distance 1: 13 pi / 192.
  CHECK(potential::ball_measure(m, 1.0, 0.5) ==
        doctest::Approx(13.0 * M_PI / 192.0).epsilon(1e-10));
}

TEST_CASE("centered potential of the unit indicator is 2 pi") {
  // Piecewise closed form: int_0^1 (4 pi t / 3) dt + int_1^inf (4 pi/3) t^{-2} dt
  // = 2 pi / 3 + 4 pi / 3.
  const RadialMeasure m(Forcing::indicator(1.0), kP32);
  CHECK(potential::wolff_potential(m, 0.0) ==
        doctest::Approx(6.283185307179586).epsilon(1e-10));
}

TEST_CASE("off-center potential of an infinite-support measure") {
  // Reference value from an extended-precision evaluation of the cap-reduced
  // double integral; exercises the saturating power-tail substitution.
  const RadialMeasure m(Forcing::power_tail(4.0), kP32);
  CHECK(potential::wolff_potential(m, 2.0) ==
        doctest::Approx(1.1635528346628864).epsilon(1e-8));
}

TEST_CASE("near/far split is additive and sits under its closed-form bounds") {
  const RadialMeasure ind(Forcing::indicator(1.0), kP32);
  for (double d : {1.0, 2.0, 4.0}) {
    const auto sb = potential::split_bounds(ind, d);
    const double total = potential::wolff_potential(ind, d);
    CHECK(sb.near + sb.far == doctest::Approx(total).epsilon(1e-10));
    CHECK(sb.near <= sb.near_bound * (1.0 + 1e-12));
    CHECK(sb.far <= sb.far_bound * (1.0 + 1e-12));
    CHECK(sb.near >= 0.0);
    CHECK(sb.far > 0.0);
  }
  const RadialMeasure pt(Forcing::power_tail(4.0), kP32);
  const auto sb = potential::split_bounds(pt, 2.0);
  CHECK(sb.near + sb.far ==
        doctest::Approx(potential::wolff_potential(pt, 2.0)).epsilon(1e-10));
  CHECK(sb.near <= sb.near_bound * (1.0 + 1e-12));
  CHECK(sb.far <= sb.far_bound * (1.0 + 1e-12));

  CHECK_THROWS_AS(potential::split_bounds(ind, 0.0), InvalidInput);
}

TEST_CASE("centered potential equals the exact solution up to the surface factor") {
  // u(0) |S1|^{1/(p-1)} = W(0) for the model operator.
  auto ci = potential::center_identity_check(Forcing::indicator(1.0), kP32);
  CHECK(ci.u0 == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ci.w0 == doctest::Approx(6.283185307179586).epsilon(1e-10));
  CHECK(ci.ratio == doctest::Approx(1.0).epsilon(1e-8));

  ci = potential::center_identity_check(Forcing::power_tail(4.0), kP32);
  CHECK(ci.u0 == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(ci.ratio == doctest::Approx(1.0).epsilon(1e-8));

  // Degenerate family: u(0) = 4/3, W(0) = u(0) sqrt(2 pi^2).
  ci = potential::center_identity_check(Forcing::indicator(1.0), kP43);
  CHECK(ci.u0 == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(ci.w0 == doctest::Approx(4.0 / 3.0 * M_PI * std::sqrt(2.0)).epsilon(1e-8));
  CHECK(ci.ratio == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(potential::wolff_potential(RadialMeasure(Forcing::indicator(1.0), kP32),
                                             -1.0),
                  InvalidInput);
}
