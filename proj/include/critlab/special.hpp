#pragma once

namespace critlab {

// Surface measure of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

// Volume of the unit ball in R^n.
double ball_volume(int n);

// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
// Continued-fraction evaluation, ~1e-14 relative accuracy.
double ibeta_reg(double a, double b, double x);

// Fraction of the surface measure of S^{n-1} covered by the spherical cap
// { y : y.e >= cos_theta } of opening angle theta.  n >= 2.
double cap_fraction(int n, double cos_theta);

}  // namespace critlab
