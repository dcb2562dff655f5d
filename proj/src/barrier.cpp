#include "critlab/barrier.hpp"

#include <cmath>

#include "critlab/criterion.hpp"
#include "critlab/errors.hpp"
#include "critlab/special.hpp"

namespace critlab::barrier {

BarrierParams::BarrierParams(ProblemParams params_, double eps_, double delta_)
    : params(params_), eps(eps_), delta(delta_) {
  if (!params.supercritical())
    throw UnsupportedRegime("barrier requires the supercritical regime n > p");
  if (!(eps > 0.0)) throw InvalidInput("barrier: eps must be positive");
  if (!(delta > 0.0)) throw InvalidInput("barrier: delta must be positive");
}

double barrier_value(const BarrierParams& bp, double r) {
  if (std::isnan(r) || r < 0.0) throw DomainError("barrier evaluated at negative radius");
  return bp.eps * std::pow(1.0 + r / bp.delta, -bp.kappa());
}

RadialProfile barrier_profile(const BarrierParams& bp, const RadialGrid& grid) {
  grid.validate();
  RadialProfile prof;
  prof.grid = grid;
  prof.values.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) prof.values[i] = barrier_value(bp, grid.nodes[i]);
  return prof;
}

Forcing forcing_from(const Nonlinearity& f, const BarrierParams& bp) {
  Forcing F;
  auto fc = std::make_shared<Nonlinearity>(f);
  const BarrierParams b = bp;
  F.eval = [fc, b](double r) { return eval_nonlinearity(*fc, barrier_value(b, r)); };
  F.support_radius = std::numeric_limits<double>::infinity();
  F.label = "barrier(" + f.label() + ")";
  return F;
}

RadialProfile forcing_profile(const Nonlinearity& f, const BarrierParams& bp,
                              const RadialGrid& grid) {
  grid.validate();
  const Forcing F = forcing_from(f, bp);
  RadialProfile prof;
  prof.grid = grid;
  prof.values.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) prof.values[i] = F(grid.nodes[i]);
  return prof;
}

namespace {

// sum of 2^{i(n+p')} F(2^i)^{p'} over i = -60..60, with negligibility of the
// extreme terms relative to the sum.
std::pair<double, bool> dyadic_moment(const std::function<double(double)>& F,
                                      const ProblemParams& params) {
  const double pc = params.p_conj();
  double sum = 0.0, first = 0.0, last = 0.0;
  for (int i = -60; i <= 60; ++i) {
    const double r = std::ldexp(1.0, i);
    const double Fv = F(r);
    const double term = Fv > 0.0
                            ? std::exp(i * (params.n + pc) * std::log(2.0) + pc * std::log(Fv))
                            : 0.0;
    if (!std::isfinite(term)) throw NonFinite("dyadic moment overflow at scale 2^" + std::to_string(i));
    if (i == -60) first = term;
    if (i == 60) last = term;
    sum += term;
  }
  const bool negligible = sum > 0.0 && first <= 1e-16 * sum && last <= 1e-16 * sum;
  return {sum, negligible};
}

// Tail of int_R^inf r^{power} F(r)^{fpow} dr via r = R/u: a density decaying
// like r^{-beta} transforms to u^{fpow beta - power - 2}, at worst an
// integrable power singularity at u = 0, where the adaptive cascade can keep
// halving (the generic map onto [0,1) parks the same singularity at the
// unrepresentable endpoint s = 1 and stalls on slow tails).  Log-space
// assembly keeps the Jacobian finite until the decaying density cancels it.
double tail_moment(const Forcing& F, double power, double fpow, double R,
                   const quad::QuadratureSpec& spec) {
  const auto h = [&](double u) -> double {
    if (u <= 0.0) return 0.0;
    const double fv = F(R / u);
    if (fv <= 0.0) return 0.0;
    const double arg =
        (power + 1.0) * std::log(R) - (power + 2.0) * std::log(u) + fpow * std::log(fv);
    if (arg > 709.0)
      throw NonConvergence("moment tail integrand exceeds double range",
                           std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity());
    return std::exp(arg);
  };
  const quad::QuadResult res = quad::integrate(h, 0.0, 1.0, spec);
  // The evaluated density underflows to zero beyond some radius, so mass out
  // there is invisible to the cascade no matter how it refines.  Locate the
  // last dyadic scale still visible; unless its octave mass is negligible
  // against the certified tolerance, the tail is too close to critical decay
  // for the value to be trusted (it spreads its moment over radii beyond
  // double range) and the only honest answer is a refusal.
  double octave = 0.0;
  bool seen = false;
  for (int j = 1; j <= 1074; ++j) {
    const double u = std::ldexp(1.0, -j);
    const double hv = h(u);
    if (hv > 0.0) {
      octave = hv * u;
      seen = true;
    } else if (seen) {
      break;
    }
  }
  const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(res.value));
  if (1000.0 * octave > tol)
    throw NonConvergence("moment tail carries mass beyond the underflow horizon", res.value,
                         octave);
  return res.value;
}

// Head/tail cut for infinite supports: beyond the last jump (and r = 1) the
// densities here are smooth and monotone, so the inversion applies.
double tail_cut(const Forcing& F) {
  double cut = 1.0;
  for (double j : F.jumps)
    if (std::isfinite(j)) cut = std::max(cut, j);
  return cut;
}

double moment_integral(const Forcing& F, double power, const quad::QuadratureSpec& spec) {
  const auto head = [&](double r) { return r == 0.0 ? 0.0 : std::pow(r, power) * F(r); };
  try {
    if (std::isfinite(F.support_radius))
      return quad::integrate_split(head, 0.0, F.support_radius, F.jumps, spec).value;
    const double cut = tail_cut(F);
    return quad::integrate_split(head, 0.0, cut, F.jumps, spec).value +
           tail_moment(F, power, 1.0, cut, spec);
  } catch (const NonConvergence& e) {
    throw DivergentMoment("moment integral r^" + std::to_string(power) +
                          " F did not converge (estimate " + std::to_string(e.value) + ")");
  }
}

}  // namespace

MomentReport moment_report(const Nonlinearity& f, const BarrierParams& bp,
                           const quad::QuadratureSpec& spec) {
  const ProblemParams& pr = bp.params;
  const double m = (pr.p - 1.0) / (pr.n - pr.p);  // 1/kappa
  const Forcing F = forcing_from(f, bp);

  MomentReport rep;
  rep.moment_n_minus_1 = moment_integral(F, pr.n - 1.0, spec);
  rep.moment_np = moment_integral(F, pr.n * (pr.p - 1.0) / pr.p, spec);
  rep.cov_lhs = rep.moment_n_minus_1;

  // Transformed side: substitution t = b(r) maps the r-moment onto (0, eps).
  // The integrand vanishes like (eps - t)^{n-1} at t = eps and carries the
  // small-t weight (eps/t)^{m+1} f(t); split at eps/2 to localize refinement.
  // Evaluated in log space: the shell factor alone can overflow a double
  // even when the product with f is moderate.
  const double eps = bp.eps;
  auto tside = [&](double t) -> double {
    if (t <= 0.0) return 0.0;
    const double fv = eval_nonlinearity(f, t);
    if (fv <= 0.0) return 0.0;
    const double lr = std::log(eps / t);  // >= 0 on (0, eps]
    const double mr = m * lr;
    const double lshells = mr > 30.0 ? (pr.n - 1.0) * mr
                                     : (pr.n - 1.0) * std::log(std::expm1(mr));
    return std::exp(lshells + (m + 1.0) * lr + std::log(fv));
  };
  const double splits[] = {0.5 * eps};
  try {
    rep.cov_mid = m * std::pow(bp.delta, pr.n) / eps *
                  quad::integrate_split(tside, 0.0, eps, splits, spec).value;
  } catch (const NonConvergence& e) {
    throw DivergentMoment("transformed moment did not converge (estimate " +
                          std::to_string(e.value) + ")");
  }

  const auto crit = criterion::classify(f, pr, spec);
  rep.cov_bound = crit.verdict == criterion::Verdict::Converges
                      ? m * std::pow(eps, pr.sigma()) * std::pow(bp.delta, pr.n) * crit.value
                      : std::numeric_limits<double>::quiet_NaN();

  auto [sum, neg] = dyadic_moment([&](double r) { return F(r); }, pr);
  rep.dyadic_sum = sum;
  rep.dyadic_tail_negligible = neg;
  return rep;
}

DualNormReport dual_norm_estimate(const Forcing& F, const ProblemParams& params,
                                  const quad::QuadratureSpec& spec) {
  if (!params.supercritical())
    throw UnsupportedRegime("dual-norm estimate requires n > p");
  const double pc = params.p_conj();
  DualNormReport rep;
  const auto head = [&](double r) {
    if (r == 0.0) return 0.0;
    const double Fv = F(r);
    return Fv > 0.0 ? std::exp((pc + params.n - 1.0) * std::log(r) + pc * std::log(Fv)) : 0.0;
  };
  try {
    if (std::isfinite(F.support_radius)) {
      rep.lebesgue_side =
          sphere_area(params.n) *
          quad::integrate_split(head, 0.0, F.support_radius, F.jumps, spec).value;
    } else {
      const double cut = tail_cut(F);
      rep.lebesgue_side =
          sphere_area(params.n) *
          (quad::integrate_split(head, 0.0, cut, F.jumps, spec).value +
           tail_moment(F, pc + params.n - 1.0, pc, cut, spec));
    }
  } catch (const NonConvergence& e) {
    throw DivergentMoment("dual-norm integral did not converge (estimate " +
                          std::to_string(e.value) + ")");
  }
  rep.moment_np = moment_integral(F, params.n * (params.p - 1.0) / params.p, spec);
  auto [sum, neg] = dyadic_moment([&](double r) { return F(r); }, params);
  rep.dyadic_sum = sum;
  rep.tail_negligible = neg;
  return rep;
}

}  // namespace critlab::barrier
