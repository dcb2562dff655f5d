#pragma once

#include "critlab/core.hpp"
#include "critlab/quad.hpp"

namespace critlab::barrier {

// Parameters of the decaying barrier b(r) = eps (1 + r/delta)^{-kappa}.
struct BarrierParams {
  ProblemParams params;
  double eps = 1.0;
  double delta = 1.0;

  BarrierParams(ProblemParams params, double eps, double delta);
  double kappa() const { return params.kappa(); }
};

double barrier_value(const BarrierParams& bp, double r);
RadialProfile barrier_profile(const BarrierParams& bp, const RadialGrid& grid);

// Forcing F(r) = f(b(r)) induced by running the nonlinearity along the
// barrier.  f is evaluated as given (regularize first if the growth floor is
// wanted).  F is non-increasing since b decreases and f is non-decreasing.
Forcing forcing_from(const Nonlinearity& f, const BarrierParams& bp);
RadialProfile forcing_profile(const Nonlinearity& f, const BarrierParams& bp,
                              const RadialGrid& grid);

// Moment integrals of F plus both sides of the change-of-variables identity
//   int_0^inf r^{n-1} F dr
//     = (p-1)/(n-p) * delta^n / eps
//       * int_0^eps ((eps/t)^m - 1)^{n-1} (eps/t)^{m+1} f(t) dt,
//   m = (p-1)/(n-p),
// together with its upper bound in terms of the smallness integral.
struct MomentReport {
  double moment_n_minus_1 = 0.0;  // int r^{n-1} F dr
  double moment_np = 0.0;         // int r^{n(p-1)/p} F dr
  double cov_lhs = 0.0;           // identity left side (= moment_n_minus_1)
  double cov_mid = 0.0;           // transformed t-side of the identity
  double cov_bound = 0.0;         // (p-1)/(n-p) eps^sigma delta^n * smallness integral
  double dyadic_sum = 0.0;        // sum_i 2^{i(n+p')} F(2^i)^{p'}
  bool dyadic_tail_negligible = false;
};

MomentReport moment_report(const Nonlinearity& f, const BarrierParams& bp,
                           const quad::QuadratureSpec& spec = {});

// Integral and dyadic forms of the dual-norm moment of a general forcing.
struct DualNormReport {
  double lebesgue_side = 0.0;  // |S1| int r^{p'+n-1} F^{p'} dr
  double dyadic_sum = 0.0;     // sum_i 2^{i(n+p')} F(2^i)^{p'}
  double moment_np = 0.0;      // int r^{n(p-1)/p} F dr
  bool tail_negligible = false;
};

DualNormReport dual_norm_estimate(const Forcing& F, const ProblemParams& params,
                                  const quad::QuadratureSpec& spec = {});

}  // namespace critlab::barrier
