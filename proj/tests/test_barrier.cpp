#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "critlab/barrier.hpp"
#include "critlab/errors.hpp"

using namespace critlab;
using barrier::BarrierParams;

namespace {
const ProblemParams kP32(3, 2.0);  // kappa = 1, sigma = 3
const ProblemParams kP43(4, 3.0);  // kappa = 1/2, sigma = 8

// Slow power tails in the second family sit near the quadrature's precision
// floor; the moment tests there run with a relaxed target.
quad::QuadratureSpec relaxed() {
  quad::QuadratureSpec s;
  s.rel_tol = 1e-8;
  s.abs_tol = 1e-12;
  return s;
}
}  // namespace

TEST_CASE("barrier decays by 2^-kappa per doubling scale") {
  const BarrierParams b32(kP32, 1.0, 1.0);
  CHECK(barrier_value(b32, 0.0) == 1.0);
  CHECK(barrier_value(b32, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(barrier_value(b32, 3.0) == doctest::Approx(0.25).epsilon(1e-15));

  const BarrierParams b43(kP43, 0.25, 2.0);
  CHECK(barrier_value(b43, 0.0) == 0.25);
  CHECK(barrier_value(b43, 2.0) == doctest::Approx(0.25 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(barrier_value(b43, 6.0) == doctest::Approx(0.125).epsilon(1e-15));

  CHECK_THROWS_AS(barrier_value(b32, -1.0), DomainError);
  CHECK_THROWS_AS(BarrierParams(ProblemParams(3, 3.0), 1.0, 1.0), UnsupportedRegime);
  CHECK_THROWS_AS(BarrierParams(kP32, 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(BarrierParams(kP32, 1.0, -2.0), InvalidInput);
}

TEST_CASE("barrier and forcing profiles sample the closed forms on a grid") {
  const BarrierParams bp(kP32, 1.0, 1.0);
  const auto grid = RadialGrid::uniform(4.0, 8);
  const auto prof = barrier_profile(bp, grid);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(prof.values[i] ==
          doctest::Approx(1.0 / (1.0 + grid.nodes[i])).epsilon(1e-15));

  const auto f = Nonlinearity::power(4.0, 1.0);
  const auto F = forcing_from(f, bp);
  CHECK(F.label == "barrier(power:4)");
  CHECK(std::isinf(F.support_radius));
  CHECK(F(1.0) == doctest::Approx(0.0625).epsilon(1e-15));
  const auto fp = forcing_profile(f, bp, grid);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(fp.values[i] ==
          doctest::Approx(std::pow(1.0 + grid.nodes[i], -4.0)).epsilon(1e-14));
}

TEST_CASE("change of variables identity at the reference parameters") {
  // n = 3, p = 2, f = t^4, eps = delta = 1: both sides equal B(3,1) = 1/3 and
  // the smallness bound is 1/(q - sigma) = 1.
  const auto rep = barrier::moment_report(Nonlinearity::power(4.0, 1.0),
                                          BarrierParams(kP32, 1.0, 1.0));
  CHECK(rep.cov_lhs == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(rep.cov_mid == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(rep.cov_mid == doctest::Approx(rep.cov_lhs).epsilon(1e-9));
  CHECK(rep.cov_bound == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.cov_lhs <= rep.cov_bound * (1.0 + 1e-12));
  // moment_np = int r^{3/2} (1+r)^{-4} dr = B(5/2, 3/2) = pi/16.
  CHECK(rep.moment_np == doctest::Approx(0.19634954084936207).epsilon(1e-10));
  // Frozen dyadic sum: sum_i 2^{5i} (1 + 2^i)^{-8}.
  CHECK(rep.dyadic_sum == doctest::Approx(0.013739945738375079).epsilon(1e-13));
  CHECK(rep.dyadic_tail_negligible);
}

TEST_CASE("identity scales as eps^q delta^n across parameter choices") {
  // For f = t^4 on (0, eps] both sides equal eps^4 delta^3 / 3 and the bound
  // is eps^4 delta^3, exactly a factor 3 above.
  for (const auto [eps, delta] : {std::pair{0.5, 2.0}, {0.25, 1.0}, {1.0, 4.0}}) {
    const auto f = Nonlinearity::power(4.0, eps);
    const auto rep = barrier::moment_report(f, BarrierParams(kP32, eps, delta));
    const double want = std::pow(eps, 4.0) * std::pow(delta, 3.0) / 3.0;
    CHECK(rep.cov_lhs == doctest::Approx(want).epsilon(1e-9));
    CHECK(rep.cov_mid == doctest::Approx(want).epsilon(1e-9));
    CHECK(rep.cov_bound == doctest::Approx(3.0 * want).epsilon(1e-11));
  }
}

TEST_CASE("change of variables identity in the second parameter family") {
  // n = 4, p = 3, f = t^9, eps = delta = 1: the r side is B(4, 1/2) = 32/35
  // and the t side is 2 int_0^1 (1 - t^2)^3 dt = 32/35 as well.
  const auto rep = barrier::moment_report(Nonlinearity::power(9.0, 1.0),
                                          BarrierParams(kP43, 1.0, 1.0), relaxed());
  CHECK(rep.cov_lhs == doctest::Approx(32.0 / 35.0).epsilon(1e-6));
  CHECK(rep.cov_mid == doctest::Approx(32.0 / 35.0).epsilon(1e-6));
  CHECK(rep.cov_bound == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.cov_lhs <= rep.cov_bound);
}

TEST_CASE("moments refuse nonlinearities whose forcing tail carries mass") {
  // f = t^3 rides the critical growth: r^2 F ~ 1/r and the moment diverges.
  CHECK_THROWS_AS(barrier::moment_report(Nonlinearity::power(3.0, 1.0),
                                         BarrierParams(kP32, 1.0, 1.0)),
                  DivergentMoment);
  // A log-critical tail converges only over astronomically large radii; the
  // quadrature reports failure instead of a silently truncated number.
  CHECK_THROWS_AS(barrier::moment_report(
                      Nonlinearity::power_log(3.0, 2.0, std::exp(-1.0)),
                      BarrierParams(kP32, std::exp(-1.0), 1.0)),
                  DivergentMoment);
}

TEST_CASE("dual norm of the unit indicator against closed forms") {
  const auto rep = barrier::dual_norm_estimate(Forcing::indicator(1.0), kP32);
  // |S1| int_0^1 r^4 dr = 4 pi / 5.
  CHECK(rep.lebesgue_side == doctest::Approx(4.0 * M_PI / 5.0).epsilon(1e-12));
  // int_0^1 r^{3/2} dr = 2/5.
  CHECK(rep.moment_np == doctest::Approx(0.4).epsilon(1e-12));
  // sum_{i <= 0} 2^{5i} = 32/31.
  CHECK(rep.dyadic_sum == doctest::Approx(32.0 / 31.0).epsilon(1e-14));
  CHECK(rep.tail_negligible);
  CHECK_THROWS_AS(barrier::dual_norm_estimate(Forcing::indicator(1.0), ProblemParams(3, 3.0)),
                  UnsupportedRegime);
}

TEST_CASE("dual norm of the barrier forcing matches the Beta-function value") {
  // F = (1+r)^{-4}: |S1| int r^4 (1+r)^{-8} dr = 4 pi B(5,3) = 4 pi / 105.
  const auto F = forcing_from(Nonlinearity::power(4.0, 1.0), BarrierParams(kP32, 1.0, 1.0));
  const auto rep = barrier::dual_norm_estimate(F, kP32);
  CHECK(rep.lebesgue_side == doctest::Approx(0.11967972013675403).epsilon(1e-10));
  CHECK(rep.moment_np == doctest::Approx(0.19634954084936207).epsilon(1e-10));
  CHECK(rep.tail_negligible);
}
