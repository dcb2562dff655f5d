#pragma once

#include <span>

#include "critlab/core.hpp"
#include "critlab/quad.hpp"

namespace critlab::galerkin {

// P1 hat-function space on a radial mesh over [0, R]: natural condition at
// the axis, essential value at r = R.  Unknowns are all nodes but the last.
struct RadialFemSpace {
  RadialGrid mesh;
  double boundary_value = 0.0;

  double R() const { return mesh.r_max(); }
  int unknowns() const { return mesh.size() - 1; }
};

// Assembled weak form of -div(a(r) |u'|^{p-2} u') = F against hat functions
// with the r^{n-1} volume weight.  Element quadrature is 4-point Gauss;
// fluxes are elementwise-exact because u' is constant per element.
struct DiscreteSystem {
  RadialFemSpace space;
  ProblemParams params;
  OperatorDescriptor op;
  Eigen::ArrayXd coeff_weight;   // per element: int_e a(r) r^{n-1} dr
  Eigen::ArrayXd volume_weight;  // per element: int_e r^{n-1} dr
  Eigen::ArrayXd load;           // per node: int F phi_i r^{n-1} dr
  double truncation_estimate = 0.0;  // whole-space tail value at R committed by the BC
  bool variational = true;

  // Residual of the eps_reg-regularized system at nodal vector u
  // (boundary entry of u is overwritten with the essential value).
  Eigen::ArrayXd residual(const Eigen::ArrayXd& u, double eps_reg) const;
  double energy(const Eigen::ArrayXd& u, double eps_reg = 0.0) const;
};

DiscreteSystem assemble(const RadialFemSpace& space, const OperatorDescriptor& op,
                        const Forcing& F, const ProblemParams& params);

struct SolverSettings {
  double tol = 1e-10;
  int max_iter = 200;
  // Regularization ladder for the degenerate gradient weight.
  std::vector<double> continuation = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
};

struct GalerkinSolution {
  RadialProfile profile;  // nodal values including the boundary node
  double energy = 0.0;    // unregularized energy at the solution
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> residual_trace;
};

// Damped Newton with energy (variational) or residual (custom operator)
// line search down the continuation ladder; p = 2 solves directly.
// NoConvergence with the residual trace on iteration exhaustion.
GalerkinSolution solve_system(const DiscreteSystem& sys, const SolverSettings& settings = {});

// Scaling probe of the coercivity inequality <A(lambda v), lambda v>
// >= c1 ||lambda v||^p along a fixed decaying probe direction.
struct CoercivityProbe {
  double lambda = 0.0;
  double seminorm_p = 0.0;  // ||lambda v||^p (p-th power of the seminorm)
  double pairing = 0.0;     // <A(lambda v), lambda v>
  double ratio = 0.0;       // pairing / seminorm_p
};

std::vector<CoercivityProbe> coercivity_probe(const DiscreteSystem& sys,
                                              std::span<const double> lambdas);

// Weighted Hardy inequality on the exterior-decaying class:
//   |S1| int |u|^p r^{n-1-p} dr <= (p/(n-p))^p |S1| int |u'|^p r^{n-1} dr.
struct HardyReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
  double sharp_constant = 0.0;
};

HardyReport hardy_check(const RadialProfile& u, const ProblemParams& params,
                        const quad::QuadratureSpec& spec = {});

// Exact-profile overload for closed-form test functions (value + derivative).
struct AnalyticProfile {
  std::function<double(double)> u;
  std::function<double(double)> du;
  double support = std::numeric_limits<double>::infinity();
  std::string label;
};

HardyReport hardy_check(const AnalyticProfile& u, const ProblemParams& params,
                        const quad::QuadratureSpec& spec = {});

// lambda-mean over balls B_{2r}(0) against the infimum: finite spread of
// mean/inf certifies the weak Harnack behavior for lambda < sigma.
struct HarnackRow {
  double r = 0.0;
  double mean = 0.0;      // ( avg of u^lambda over B_{2r} )^{1/lambda}
  double inf_ball = 0.0;  // min of u over B_r
  double ratio = 0.0;
};

std::vector<HarnackRow> weak_harnack_check(const RadialProfile& u, const ProblemParams& params,
                                           double lambda, std::span<const double> radii,
                                           const quad::QuadratureSpec& spec = {});

struct NegativePartReport {
  double min_value = 0.0;
  bool nonnegative = false;
};

NegativePartReport negative_part_check(const RadialProfile& u);

}  // namespace critlab::galerkin
