#pragma once

#include <functional>
#include <span>
#include <vector>

namespace critlab::quad {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 1 << 15;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

// Globally adaptive Gauss-Kronrod 7-15 integration of f over [a, b].
// b may be +infinity (algebraic map onto [0,1)).  The worst panel is bisected
// until sum of panel error estimates <= max(abs_tol, rel_tol * |value|).
// Deterministic: the final value is a compensated sum over panels sorted by
// left endpoint.  Throws NonFinite if f returns NaN/Inf, NonConvergence
// (carrying the best estimate) if the panel budget is exhausted.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

// integrate with interior split points (kinks / jumps); splits outside (a,b)
// are ignored.  Error budget is shared across the pieces.
QuadResult integrate_split(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> splits, const QuadratureSpec& spec = {});

// Power-law tail fit from dyadic samples (t[i], f[i]) with t strictly
// decreasing toward 0 and f > 0.  exponent is the least-squares slope of
// log f against log t over the latter (small-t) half of the samples; band is
// the largest deviation of a local two-point slope from that fit.
struct TailFit {
  double exponent = 0.0;
  double band = 0.0;
};

TailFit classify_tail(std::span<const double> t, std::span<const double> f);

}  // namespace critlab::quad
