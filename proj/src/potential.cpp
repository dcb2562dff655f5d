#include "critlab/potential.hpp"

#include <algorithm>
#include <cmath>

#include "critlab/errors.hpp"
#include "critlab/radial.hpp"
#include "critlab/special.hpp"

namespace critlab::potential {

namespace {

// Potentials stack three adaptive levels (mass inside ball inside the outer
// dr/r integral), so the inner levels run tighter than the caller asks.
quad::QuadratureSpec tighter(const quad::QuadratureSpec& spec, double factor) {
  quad::QuadratureSpec s = spec;
  s.rel_tol = std::max(spec.rel_tol * factor, 1e-14);
  s.abs_tol = std::max(spec.abs_tol * factor, 1e-300);
  return s;
}

double shell_integrand(const Forcing& F, int n, double t) {
  return t == 0.0 ? 0.0 : std::pow(t, n - 1) * F(t);
}

// Mass of the centered ball B_s(0).
double centered_mass(const RadialMeasure& m, double s, const quad::QuadratureSpec& spec) {
  const double hi = std::min(s, m.density.support_radius);
  if (!(hi > 0.0)) return 0.0;
  return sphere_area(m.params.n) *
         quad::integrate_split(
             [&](double t) { return shell_integrand(m.density, m.params.n, t); }, 0.0, hi,
             m.density.jumps, spec)
             .value;
}

// Shell mass beyond R for an infinite-support density, via t = R / u: a
// density decaying like t^{-beta} (beta > n whenever the mass is finite)
// transforms to u^{beta-n-1}, at worst an integrable power singularity at
// u = 0 where the adaptive cascade can keep halving.
double shell_tail(const Forcing& F, int n, double R, const quad::QuadratureSpec& spec) {
  return quad::integrate(
             [&](double u) {
               const double fv = F(R / u);
               if (fv <= 0.0) return 0.0;
               return std::exp(n * std::log(R) - (n + 1.0) * std::log(u) + std::log(fv));
             },
             0.0, 1.0, spec)
      .value;
}

}  // namespace

RadialMeasure::RadialMeasure(Forcing density_, ProblemParams params_,
                             const quad::QuadratureSpec& spec)
    : density(std::move(density_)), params(params_) {
  const int n = params.n;
  const auto shell = [&](double t) { return shell_integrand(density, n, t); };
  try {
    if (std::isfinite(density.support_radius)) {
      mass = sphere_area(n) *
             quad::integrate_split(shell, 0.0, density.support_radius, density.jumps, spec)
                 .value;
    } else {
      double cut = 1.0;
      for (double j : density.jumps)
        if (std::isfinite(j)) cut = std::max(cut, j);
      mass = sphere_area(n) *
             (quad::integrate_split(shell, 0.0, cut, density.jumps, spec).value +
              shell_tail(density, n, cut, spec));
    }
  } catch (const NonConvergence& e) {
    throw DivergentMass("measure has divergent total mass (estimate " +
                        std::to_string(sphere_area(n) * e.value) + ")");
  }
  if (!std::isfinite(mass)) throw DivergentMass("measure has non-finite total mass");
}

double total_mass(const RadialMeasure& m) { return m.mass; }

double ball_measure(const RadialMeasure& m, double d, double r,
                    const quad::QuadratureSpec& spec) {
  if (!(r > 0.0)) throw InvalidInput("ball_measure: radius must be positive");
  if (std::isnan(d) || d < 0.0) throw InvalidInput("ball_measure: center distance must be >= 0");
  if (d == 0.0) return centered_mass(m, r, spec);
  const int n = m.params.n;
  const double S = sphere_area(n);
  // Shells with t <= r - d lie entirely inside the ball.
  double full = 0.0;
  if (r > d) full = centered_mass(m, r - d, spec);
  // Shells with |d - r| < t < d + r intersect the ball in a cap with
  // cos(theta*) = (t^2 + d^2 - r^2) / (2 t d).
  const double lo = std::fabs(d - r);
  const double hi = std::min(d + r, m.density.support_radius);
  if (!(hi > lo)) return full;
  const double partial =
      S *
      quad::integrate_split(
          [&](double t) {
            const double c = (t * t + d * d - r * r) / (2.0 * t * d);
            return shell_integrand(m.density, n, t) * cap_fraction(n, c);
          },
          lo, hi, m.density.jumps, spec)
          .value;
  return full + partial;
}

namespace {

// Integrand of the potential: (mu(B_t(x)) / t^{n-p})^{1/(p-1)} / t.
double wolff_integrand(const RadialMeasure& m, double d, double t,
                       const quad::QuadratureSpec& ball_spec) {
  if (t <= 0.0) return 0.0;
  const double mu = ball_measure(m, d, t, ball_spec);
  if (mu <= 0.0) return 0.0;
  const ProblemParams& pr = m.params;
  return std::exp((std::log(mu) - (pr.n - pr.p) * std::log(t)) / (pr.p - 1.0) -
                  std::log(t));
}

// Geometric breakpoints of the potential integrand for a center at distance
// d: cap geometry changes at d (center enters the ball) and the measure
// saturates once the ball swallows the support.
std::vector<double> wolff_splits(const RadialMeasure& m, double d) {
  std::vector<double> s;
  if (d > 0.0) {
    s.push_back(0.5 * d);
    s.push_back(d);
    s.push_back(2.0 * d);
  }
  const double sup = m.density.support_radius;
  if (std::isfinite(sup)) {
    if (d > sup && d - sup > 0.0) s.push_back(d - sup);
    s.push_back(d + sup);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

double wolff_over(const RadialMeasure& m, double d, double a, double b,
                  const quad::QuadratureSpec& spec) {
  const quad::QuadratureSpec ball_spec = tighter(spec, 1e-2);
  const auto splits = wolff_splits(m, d);
  const auto g = [&](double t) { return wolff_integrand(m, d, t, ball_spec); };
  const double kappa = m.params.kappa();
  try {
    if (!std::isinf(b)) return quad::integrate_split(g, a, b, splits, spec).value;
    if (std::isfinite(m.density.support_radius)) {
      // Once the ball swallows the whole support (t >= d + support) the
      // integrand is exactly mass^{1/(p-1)} t^{-kappa-1}; close that tail in
      // closed form instead of asking the quadrature to chase a pure power.
      const double t_sat = d + m.density.support_radius;
      const double amp = std::pow(m.mass, 1.0 / (m.params.p - 1.0));
      if (a >= t_sat) return amp * std::pow(a, -kappa) / kappa;
      return quad::integrate_split(g, a, t_sat, splits, spec).value +
             amp * std::pow(t_sat, -kappa) / kappa;
    }
    // Infinite support: past the last geometric breakpoint substitute
    // x = (R/t)^kappa, under which the saturating power tail becomes a
    // bounded integrand on (0, 1].  Log-space assembly keeps the Jacobian
    // from overflowing before the decaying integrand cancels it.
    const double R = std::max({a, 1.0, splits.empty() ? 0.0 : splits.back()});
    const double head = a < R ? quad::integrate_split(g, a, R, splits, spec).value : 0.0;
    const double tail =
        quad::integrate(
            [&](double x) {
              const double v = g(R * std::pow(x, -1.0 / kappa));
              if (v <= 0.0) return 0.0;
              return std::exp(std::log(v) + std::log(R / kappa) -
                              (1.0 / kappa + 1.0) * std::log(x));
            },
            0.0, 1.0, spec)
            .value;
    return head + tail;
  } catch (const NonConvergence& e) {
    throw DivergentMass("potential integral did not converge (estimate " +
                        std::to_string(e.value) + ")");
  }
}

}  // namespace

double wolff_potential(const RadialMeasure& m, double d, const quad::QuadratureSpec& spec) {
  if (std::isnan(d) || d < 0.0) throw InvalidInput("wolff_potential: center distance must be >= 0");
  if (!m.params.supercritical())
    throw UnsupportedRegime("potential requires the supercritical regime n > p");
  return wolff_over(m, d, 0.0, std::numeric_limits<double>::infinity(), spec);
}

SplitBounds split_bounds(const RadialMeasure& m, double d, const quad::QuadratureSpec& spec) {
  if (!(d > 0.0)) throw InvalidInput("split_bounds: center distance must be positive");
  if (!m.params.supercritical())
    throw UnsupportedRegime("potential requires the supercritical regime n > p");
  const ProblemParams& pr = m.params;
  SplitBounds sb;
  sb.near = wolff_over(m, d, 0.0, 0.5 * d, spec);
  sb.far = wolff_over(m, d, 0.5 * d, std::numeric_limits<double>::infinity(), spec);
  // Balls B_t(x) with t < d/2 stay in { |y| >= d/2 }, where the density is
  // at most F(d/2) for non-increasing F: mu(B_t) <= |S1| t^n F(d/2).
  const double pm1 = pr.p - 1.0;
  const double Fhalf = m.density(0.5 * d);
  sb.near_bound = std::pow(sphere_area(pr.n) * Fhalf, 1.0 / pm1) *
                  std::pow(0.5 * d, pr.p_conj()) * pm1 / pr.p;
  sb.far_bound =
      std::pow(m.mass, 1.0 / pm1) * std::pow(0.5 * d, -pr.kappa()) / pr.kappa();
  return sb;
}

CenterIdentity center_identity_check(const Forcing& F, const ProblemParams& params,
                                     const quad::QuadratureSpec& spec) {
  CenterIdentity ci;
  ci.u0 = radial::solve_value(F, params, 0.0, spec);
  const RadialMeasure m(F, params, tighter(spec, 1e-1));
  ci.w0 = wolff_potential(m, 0.0, spec);
  ci.ratio = ci.u0 * std::pow(sphere_area(params.n), 1.0 / (params.p - 1.0)) / ci.w0;
  return ci;
}

}  // namespace critlab::potential
