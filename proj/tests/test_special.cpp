#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "critlab/errors.hpp"
#include "critlab/special.hpp"

using namespace critlab;

TEST_CASE("sphere area and ball volume match closed forms") {
  CHECK(sphere_area(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sphere_area(2) == doctest::Approx(6.283185307179586).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(12.566370614359172).epsilon(1e-15));
  CHECK(sphere_area(4) == doctest::Approx(19.739208802178716).epsilon(1e-15));
  CHECK(ball_volume(3) == doctest::Approx(4.1887902047863905).epsilon(1e-15));
  CHECK_THROWS_AS(sphere_area(0), InvalidInput);
}

TEST_CASE("regularized incomplete beta against reference values") {
  // Frozen from an independent implementation.
  CHECK(ibeta_reg(1.0, 0.5, 0.5) == doctest::Approx(0.29289321881345248).epsilon(1e-13));
  CHECK(ibeta_reg(1.5, 0.5, 0.25) == doctest::Approx(0.057668885622437299).epsilon(1e-13));
  CHECK(ibeta_reg(2.5, 0.5, 0.7) == doctest::Approx(0.2031106637200549).epsilon(1e-13));
  CHECK(ibeta_reg(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-13));
  CHECK(ibeta_reg(4.0, 2.0, 0.8) == doctest::Approx(0.73728000000000016).epsilon(1e-13));
  CHECK(ibeta_reg(2.0, 3.0, 0.0) == 0.0);
  CHECK(ibeta_reg(2.0, 3.0, 1.0) == 1.0);
  CHECK_THROWS_AS(ibeta_reg(-1.0, 2.0, 0.5), InvalidInput);
}

TEST_CASE("ibeta complement symmetry I_x(a,b) + I_{1-x}(b,a) = 1") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int k = 0; k < 200; ++k) {
    const double a = 0.5 + 4.0 * U(rng), b = 0.5 + 4.0 * U(rng), x = U(rng);
    CHECK(ibeta_reg(a, b, x) + ibeta_reg(b, a, 1.0 - x) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cap fraction closed forms in low dimension") {
  // n = 2: arc fraction theta/pi.
  CHECK(cap_fraction(2, std::cos(0.6)) == doctest::Approx(0.6 / M_PI).epsilon(1e-14));
  // n = 3: (1 - cos)/2.
  CHECK(cap_fraction(3, 0.25) == doctest::Approx(0.375).epsilon(1e-15));
  // n = 4: (2 theta - sin 2 theta)/(2 pi).
  CHECK(cap_fraction(4, std::cos(0.5)) == doctest::Approx(0.025230676391313444).epsilon(1e-12));
  CHECK(cap_fraction(4, std::cos(1.2)) == doctest::Approx(0.27446855935925973).epsilon(1e-12));
  CHECK(cap_fraction(4, std::cos(2.0)) == doctest::Approx(0.75706863044011907).epsilon(1e-12));
}

TEST_CASE("cap fraction limits and monotonicity") {
  for (int n = 2; n <= 6; ++n) {
    CHECK(cap_fraction(n, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(cap_fraction(n, -1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cap_fraction(n, 0.0) == doctest::Approx(0.5).epsilon(1e-13));
    double prev = 0.0;
    for (double c = 1.0; c >= -1.0; c -= 0.05) {
      const double fr = cap_fraction(n, c);
      CHECK(fr >= prev - 1e-14);
      prev = fr;
    }
  }
  // Out-of-range cosines clamp rather than throw.
  CHECK(cap_fraction(3, 1.5) == 0.0);
  CHECK(cap_fraction(3, -1.5) == 1.0);
}
