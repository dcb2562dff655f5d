#pragma once

#include <optional>

#include "critlab/barrier.hpp"
#include "critlab/core.hpp"
#include "critlab/quad.hpp"

namespace critlab::radial {

// Exact decaying solution of the radial model problem
//   -(r^{n-1} |u'|^{p-2} u')' = r^{n-1} F(r),  u(inf) = 0, u'(0) = 0:
//   u(r) = int_r^inf ( s^{1-n} int_0^s t^{n-1} F(t) dt )^{1/(p-1)} ds.
// Node values are computed by nested adaptive quadrature (no discretization
// of the equation), so their accuracy is the quadrature tolerance, not a
// mesh-resolution limit.  DivergentMass if the total mass integral diverges.
RadialProfile solve(const Forcing& F, const ProblemParams& params, const RadialGrid& grid,
                    const quad::QuadratureSpec& spec = {});

// Pointwise value u(r) without building a whole profile.
double solve_value(const Forcing& F, const ProblemParams& params, double r,
                   const quad::QuadratureSpec& spec = {});

// Max interior defect of the conservative finite-difference divergence
// against F at grid nodes, excluding nodes with r <= axis_exclusion and
// nodes adjacent to cells containing forcing jumps.  Second order in the
// local spacing on the included set.
double residual_check(const RadialProfile& u, const Forcing& F, const ProblemParams& params,
                      double axis_exclusion = 0.5);

struct DecayMetrics {
  double sup_u = 0.0;        // max nodal value (attained at r = 0)
  double decay_coeff = 0.0;  // max nodal u(r) r^kappa
  // r^kappa-normalized limit M^{1/(p-1)} (p-1)/(n-p); set when the forcing
  // has finite total mass and is passed in.
  std::optional<double> tail_limit;
};

DecayMetrics decay_metrics(const RadialProfile& u, const ProblemParams& params);
DecayMetrics decay_metrics(const RadialProfile& u, const ProblemParams& params,
                           const Forcing& F, const quad::QuadratureSpec& spec = {});

// Supersolution certificate for the constructed solution u against the
// barrier b: the barrier must dominate (u <= b), which by monotonicity of f
// gives F = f(b) >= f(u), i.e. u solves -div A >= f(u).
struct CertifyResult {
  bool pass = false;
  double barrier_margin = 0.0;  // min over nodes of b - u
  double forcing_margin = 0.0;  // min over nodes of f(b) - f(u)
};

CertifyResult certify_supersolution(const RadialProfile& u, const Nonlinearity& f,
                                    const barrier::BarrierParams& bp, double tol = 1e-12);

struct SearchSettings {
  double delta0 = 1.0;
  double shrink = 0.5;
  int max_iters = 60;
};

struct DeltaTrial {
  double delta = 0.0;
  double sup_u = 0.0;
  double decay_coeff = 0.0;
  bool sup_ok = false;    // sup u <= eps 2^{-kappa}
  bool decay_ok = false;  // decay_coeff <= eps 2^{-kappa} delta^kappa
};

// Certificate of a successful construction: the first delta in the shrink
// sequence satisfying both smallness conditions, with the margins of the
// certified profile.
struct Certificate {
  double delta1 = 0.0;  // first delta where the sup condition holds
  double delta2 = 0.0;  // first delta where the decay condition holds
  double delta = 0.0;   // accepted delta (both conditions)
  double barrier_margin = 0.0;
  double forcing_margin = 0.0;
  double sup_u = 0.0;
  double decay_coeff = 0.0;
  bool pass = false;
  std::vector<DeltaTrial> trajectory;
};

// Full pipeline: refuse unless the smallness criterion converges
// (CriterionDiverges / CriterionInconclusive), apply the growth floor, then
// shrink delta from delta0 until both smallness conditions hold
// (SearchExhausted after max_iters).
Certificate delta_search(const Nonlinearity& f, const ProblemParams& params,
                         const SearchSettings& settings = {},
                         const RadialGrid& grid = RadialGrid::composite(),
                         const quad::QuadratureSpec& spec = {});

// Evaluates the construction on a caller-chosen delta sequence (no search,
// no refusal logic beyond the convergence precondition).
std::vector<DeltaTrial> delta_sweep(const Nonlinearity& f, const ProblemParams& params,
                                    std::span<const double> deltas,
                                    const RadialGrid& grid = RadialGrid::composite(),
                                    const quad::QuadratureSpec& spec = {});

}  // namespace critlab::radial
