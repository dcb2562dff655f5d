#pragma once

#include "critlab/core.hpp"
#include "critlab/quad.hpp"

namespace critlab::potential {

// Radial measure d mu = F(|y|) dy.  Total mass |S1| int r^{n-1} F dr is
// computed on construction (DivergentMass if infinite).
struct RadialMeasure {
  Forcing density;
  ProblemParams params;
  double mass = 0.0;

  RadialMeasure(Forcing density, ProblemParams params,
                const quad::QuadratureSpec& spec = {});
};

double total_mass(const RadialMeasure& m);

// mu(B_r(x)) for |x| = d: reduced to a 1-D shell integral with a
// spherical-cap fraction for partially covered shells.
double ball_measure(const RadialMeasure& m, double d, double r,
                    const quad::QuadratureSpec& spec = {});

// Nonlinear potential W(x) = int_0^inf (mu(B_r(x)) / r^{n-p})^{1/(p-1)} dr/r
// at |x| = d.  Computed as one adaptive integral with splits at the
// geometric breakpoints.
double wolff_potential(const RadialMeasure& m, double d,
                       const quad::QuadratureSpec& spec = {});

// Near/far decomposition of W at the radius d/2, with the closed-form
// bounds the decomposition is compared against:
//   near <= (|S1| F(d/2))^{1/(p-1)} (d/2)^{p'} (p-1)/p   (F non-increasing)
//   far  <= mass^{1/(p-1)} (d/2)^{-kappa} (p-1)/(n-p)
struct SplitBounds {
  double near = 0.0;
  double far = 0.0;
  double near_bound = 0.0;
  double far_bound = 0.0;
};

SplitBounds split_bounds(const RadialMeasure& m, double d,
                         const quad::QuadratureSpec& spec = {});

// For the model operator the centered potential and the exact radial
// solution coincide up to the surface-measure factor:
//   u(0) |S1|^{1/(p-1)} = W(0).
struct CenterIdentity {
  double u0 = 0.0;
  double w0 = 0.0;
  double ratio = 0.0;  // u0 |S1|^{1/(p-1)} / w0
};

CenterIdentity center_identity_check(const Forcing& F, const ProblemParams& params,
                                     const quad::QuadratureSpec& spec = {});

}  // namespace critlab::potential
