#include "critlab/radial.hpp"

#include <algorithm>
#include <cmath>

#include "critlab/criterion.hpp"
#include "critlab/errors.hpp"

namespace critlab::radial {

namespace {

// Tight inner tolerance for the cumulative-mass integrals: errors there
// propagate through the 1/(p-1) power into every profile value.
quad::QuadratureSpec inner_spec(const quad::QuadratureSpec& outer) {
  quad::QuadratureSpec s;
  s.rel_tol = std::min(outer.rel_tol, 1e-12);
  s.abs_tol = std::min(outer.abs_tol, 1e-15);
  s.max_subdivisions = outer.max_subdivisions;
  return s;
}

double mass_integrand(const Forcing& F, int n, double t) {
  return t == 0.0 ? 0.0 : std::pow(t, n - 1) * F(t);
}

// Shell mass beyond R for an infinite-support forcing, via t = R / u: decay
// like t^{-beta} (beta > n whenever the mass is finite) transforms to
// u^{beta-n-1}, at worst an integrable power singularity at u = 0 where the
// adaptive cascade can keep halving.  Log-space assembly keeps the u^{-n-1}
// factor from overflowing before the tiny forcing cancels it.
double mass_beyond(const Forcing& F, int n, double R, const quad::QuadratureSpec& spec) {
  return quad::integrate(
             [&](double u) {
               const double fv = F(R / u);
               if (fv <= 0.0) return 0.0;
               return std::exp(n * std::log(R) - (n + 1.0) * std::log(u) + std::log(fv));
             },
             0.0, 1.0, spec)
      .value;
}

struct MassTable {
  const Forcing* F = nullptr;
  int n = 0;
  Eigen::ArrayXd nodes;   // grid nodes
  Eigen::ArrayXd prefix;  // mass integral from 0 to each node
  double total = 0.0;     // mass up to infinity
  quad::QuadratureSpec spec;

  // Cumulative mass at s using the nearest node below as anchor.
  double operator()(double s) const {
    const int nn = static_cast<int>(nodes.size());
    const double* begin = nodes.data();
    int j = static_cast<int>(std::upper_bound(begin, begin + nn, s) - begin) - 1;
    j = std::clamp(j, 0, nn - 1);
    double m = prefix[j];
    if (s > nodes[j])
      m += quad::integrate([&](double t) { return mass_integrand(*F, n, t); }, nodes[j], s,
                           spec)
               .value;
    return std::max(m, 0.0);
  }
};

MassTable build_mass_table(const Forcing& F, const ProblemParams& params,
                           const RadialGrid& grid, const quad::QuadratureSpec& spec) {
  MassTable mt;
  mt.F = &F;
  mt.n = params.n;
  mt.nodes = grid.nodes;
  mt.spec = inner_spec(spec);
  const int nn = grid.size();
  mt.prefix.resize(nn);
  double acc = 0.0, comp = 0.0;
  mt.prefix[0] = 0.0;
  for (int i = 0; i + 1 < nn; ++i) {
    const double cell = quad::integrate(
                            [&](double t) { return mass_integrand(F, params.n, t); },
                            grid.nodes[i], grid.nodes[i + 1], mt.spec)
                            .value;
    const double t = acc + cell;
    comp += (std::fabs(acc) >= std::fabs(cell)) ? (acc - t) + cell : (cell - t) + acc;
    acc = t;
    mt.prefix[i + 1] = acc + comp;
  }
  const double r_max = grid.r_max();
  double tail = 0.0;
  if (!(F.support_radius <= r_max)) {
    try {
      tail = mass_beyond(F, params.n, r_max, mt.spec);
    } catch (const NonConvergence& e) {
      throw DivergentMass("total mass integral did not converge (estimate " +
                          std::to_string(mt.prefix[nn - 1] + e.value) + ")");
    }
  }
  mt.total = mt.prefix[nn - 1] + tail;
  if (!std::isfinite(mt.total)) throw DivergentMass("total mass is not finite");
  return mt;
}

// phi(s) = ( s^{1-n} M(s) )^{1/(p-1)}: the slope magnitude of the decaying
// solution at radius s.
double phi_value(const MassTable& mt, const ProblemParams& params, double s) {
  if (s <= 0.0) return 0.0;
  const double M = mt(s);
  if (M <= 0.0) return 0.0;
  return std::exp((std::log(M) + (1.0 - params.n) * std::log(s)) / (params.p - 1.0));
}

// Tail integral int_R^inf phi ds when all mass lies inside R:
// phi = M^{1/(p-1)} s^{-(n-1)/(p-1)} exactly, integrating to
// M^{1/(p-1)} R^{-kappa} (p-1)/(n-p).
double exact_tail(double mass, const ProblemParams& params, double R) {
  if (mass <= 0.0) return 0.0;
  const double kappa = params.kappa();
  return std::pow(mass, 1.0 / (params.p - 1.0)) * std::pow(R, -kappa) / kappa;
}

// Tail integral int_R^inf phi ds for a slope that decays like s^{-kappa-1}
// (the generic rate once most mass is inside): the substitution
// x = (R/s)^kappa turns a pure power tail into a constant on (0, 1], so the
// transformed integrand is bounded for every kappa > 0 and adaptivity only
// has to resolve the smooth mass deficit.  The Jacobian factor is folded in
// through logs so it cannot overflow before the decaying slope cancels it.
double numeric_tail(const std::function<double(double)>& phi, const ProblemParams& params,
                    double R, const quad::QuadratureSpec& spec) {
  const double kappa = params.kappa();
  try {
    return quad::integrate(
               [&, kappa, R](double x) {
                 const double v = phi(R * std::pow(x, -1.0 / kappa));
                 if (v <= 0.0) return 0.0;
                 return std::exp(std::log(v) + std::log(R / kappa) -
                                 (1.0 / kappa + 1.0) * std::log(x));
               },
               0.0, 1.0, spec)
        .value;
  } catch (const NonConvergence& e) {
    throw DivergentMass("solution tail integral did not converge (estimate " +
                        std::to_string(e.value) + ")");
  }
}

}  // namespace

RadialProfile solve(const Forcing& F, const ProblemParams& params, const RadialGrid& grid,
                    const quad::QuadratureSpec& spec) {
  grid.validate();
  if (!params.supercritical())
    throw UnsupportedRegime("decaying radial solution requires n > p");
  const MassTable mt = build_mass_table(F, params, grid, spec);
  const int nn = grid.size();
  const double r_max = grid.r_max();

  // Slope integral over each cell, then the tail beyond r_max.
  Eigen::ArrayXd cell(nn - 1);
  for (int i = 0; i + 1 < nn; ++i)
    cell[i] = quad::integrate([&](double s) { return phi_value(mt, params, s); },
                              grid.nodes[i], grid.nodes[i + 1], spec)
                  .value;

  const double tail =
      F.support_radius <= r_max
          ? exact_tail(mt.total, params, r_max)
          : numeric_tail([&](double s) { return phi_value(mt, params, s); }, params, r_max,
                         spec);

  RadialProfile u;
  u.grid = grid;
  u.values.resize(nn);
  double acc = tail, comp = 0.0;
  u.values[nn - 1] = tail;
  for (int i = nn - 2; i >= 0; --i) {
    const double x = cell[i];
    const double t = acc + x;
    comp += (std::fabs(acc) >= std::fabs(x)) ? (acc - t) + x : (x - t) + acc;
    acc = t;
    u.values[i] = acc + comp;
  }
  u.validate();
  return u;
}

double solve_value(const Forcing& F, const ProblemParams& params, double r,
                   const quad::QuadratureSpec& spec) {
  if (std::isnan(r) || r < 0.0) throw DomainError("solve_value: negative radius");
  if (!params.supercritical())
    throw UnsupportedRegime("decaying radial solution requires n > p");
  // Anchor grid for the cumulative mass: forcing jumps plus a dyadic ladder
  // up to the support radius (or well past r for infinite support).
  const bool compact = std::isfinite(F.support_radius);
  const double lead = compact ? F.support_radius : std::max(r, 1.0);
  std::vector<double> anchors{0.0};
  for (double j : F.jumps)
    if (j > 0.0 && std::isfinite(j) && j <= lead) anchors.push_back(j);
  const double top = compact ? lead : 1024.0 * lead;
  for (double s = lead / 1024.0; s <= top * (1.0 + 1e-14); s *= 2.0) anchors.push_back(s);
  anchors.push_back(top);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  RadialGrid anchor_grid;
  anchor_grid.nodes = Eigen::Map<Eigen::ArrayXd>(anchors.data(), anchors.size());
  const MassTable mt = build_mass_table(F, params, anchor_grid, spec);

  const double R = anchor_grid.r_max();
  if (compact && r >= R) return exact_tail(mt.total, params, r);
  double value = 0.0;
  if (r < R)
    value += quad::integrate_split([&](double s) { return phi_value(mt, params, s); }, r, R,
                                   anchors, spec)
                 .value;
  if (compact) return value + exact_tail(mt.total, params, R);
  return value + numeric_tail([&](double s) { return phi_value(mt, params, s); }, params,
                              std::max(r, R), spec);
}

double residual_check(const RadialProfile& u, const Forcing& F, const ProblemParams& params,
                      double axis_exclusion) {
  u.validate();
  const RadialGrid& g = u.grid;
  const int nn = g.size();
  if (nn < 4) throw GridTooCoarse("residual check needs at least 4 nodes");
  const double p = params.p;
  auto flux = [p](double g) {
    return g == 0.0 ? 0.0 : std::pow(std::fabs(g), p - 2.0) * g;
  };
  auto cell_has_jump = [&](int i) {
    for (double j : F.jumps)
      if (j >= g.nodes[i] - 1e-12 && j <= g.nodes[i + 1] + 1e-12) return true;
    return false;
  };
  double worst = 0.0;
  for (int i = 1; i + 1 < nn; ++i) {
    const double r = g.nodes[i];
    if (r <= axis_exclusion) continue;
    if (cell_has_jump(i - 1) || cell_has_jump(i)) continue;
    const double hl = g.nodes[i] - g.nodes[i - 1];
    const double hr = g.nodes[i + 1] - g.nodes[i];
    const double rl = g.nodes[i] - 0.5 * hl, rr = g.nodes[i] + 0.5 * hr;
    const double gl = (u.values[i] - u.values[i - 1]) / hl;
    const double gr = (u.values[i + 1] - u.values[i]) / hr;
    const double div = (std::pow(rr, params.n - 1.0) * flux(gr) -
                        std::pow(rl, params.n - 1.0) * flux(gl)) /
                       (0.5 * (hl + hr) * std::pow(r, params.n - 1.0));
    worst = std::max(worst, std::fabs(-div - F(r)));
  }
  return worst;
}

DecayMetrics decay_metrics(const RadialProfile& u, const ProblemParams& params) {
  u.validate();
  const double kappa = params.kappa();
  DecayMetrics m;
  m.sup_u = u.values.maxCoeff();
  for (int i = 1; i < u.grid.size(); ++i)
    m.decay_coeff = std::max(m.decay_coeff, u.values[i] * std::pow(u.grid.nodes[i], kappa));
  return m;
}

DecayMetrics decay_metrics(const RadialProfile& u, const ProblemParams& params,
                           const Forcing& F, const quad::QuadratureSpec& spec) {
  DecayMetrics m = decay_metrics(u, params);
  try {
    const auto integrand = [&](double t) { return mass_integrand(F, params.n, t); };
    double mass;
    if (std::isfinite(F.support_radius)) {
      mass = quad::integrate_split(integrand, 0.0, F.support_radius, F.jumps, spec).value;
    } else {
      double cut = 1.0;
      for (double j : F.jumps)
        if (std::isfinite(j)) cut = std::max(cut, j);
      mass = quad::integrate_split(integrand, 0.0, cut, F.jumps, spec).value +
             mass_beyond(F, params.n, cut, spec);
    }
    m.tail_limit = std::pow(mass, 1.0 / (params.p - 1.0)) / params.kappa();
  } catch (const NonConvergence&) {
    m.tail_limit.reset();
  }
  return m;
}

CertifyResult certify_supersolution(const RadialProfile& u, const Nonlinearity& f,
                                    const barrier::BarrierParams& bp, double tol) {
  u.validate();
  CertifyResult res;
  double bm = std::numeric_limits<double>::infinity();
  double fm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.grid.size(); ++i) {
    const double b = barrier_value(bp, u.grid.nodes[i]);
    const double uv = std::max(u.values[i], 0.0);
    bm = std::min(bm, b - u.values[i]);
    // f is only defined up to eps; above it the margin is negative anyway
    // and f(eps) is a lower bound for the true f(u).
    const double fu = eval_nonlinearity(f, std::min(uv, f.eps));
    fm = std::min(fm, eval_nonlinearity(f, b) - fu);
  }
  res.barrier_margin = bm;
  res.forcing_margin = fm;
  res.pass = bm >= -tol && fm >= -tol;
  return res;
}

namespace {

DeltaTrial run_trial(const Nonlinearity& freg, const ProblemParams& params, double delta,
                     const RadialGrid& grid, const quad::QuadratureSpec& spec,
                     RadialProfile* out_u, barrier::BarrierParams* out_bp) {
  const barrier::BarrierParams bp(params, freg.eps, delta);
  const Forcing F = barrier::forcing_from(freg, bp);
  RadialProfile u = solve(F, params, grid, spec);
  const DecayMetrics dm = decay_metrics(u, params);
  const double kappa = params.kappa();
  const double sup_target = freg.eps * std::pow(2.0, -kappa);
  DeltaTrial trial;
  trial.delta = delta;
  trial.sup_u = dm.sup_u;
  trial.decay_coeff = dm.decay_coeff;
  trial.sup_ok = dm.sup_u <= sup_target;
  trial.decay_ok = dm.decay_coeff <= sup_target * std::pow(delta, kappa);
  if (out_u) *out_u = std::move(u);
  if (out_bp) *out_bp = bp;
  return trial;
}

}  // namespace

Certificate delta_search(const Nonlinearity& f, const ProblemParams& params,
                         const SearchSettings& settings, const RadialGrid& grid,
                         const quad::QuadratureSpec& spec) {
  if (!(settings.delta0 > 0.0) || !(settings.shrink > 0.0) || !(settings.shrink < 1.0))
    throw InvalidInput("delta search: needs delta0 > 0 and shrink in (0, 1)");
  const auto crit = criterion::classify(f, params, spec);
  if (crit.verdict == criterion::Verdict::Diverges)
    throw CriterionDiverges("smallness criterion diverges: only the trivial solution exists");
  if (crit.verdict == criterion::Verdict::Inconclusive)
    throw CriterionInconclusive("smallness criterion could not be classified");
  const Nonlinearity freg = criterion::regularize(f, params);

  Certificate cert;
  double delta = settings.delta0;
  RadialProfile u_final;
  barrier::BarrierParams bp_final(params, freg.eps, settings.delta0);
  bool found = false;
  for (int k = 0; k < settings.max_iters; ++k, delta *= settings.shrink) {
    RadialProfile u;
    barrier::BarrierParams bp = bp_final;
    const DeltaTrial trial = run_trial(freg, params, delta, grid, spec, &u, &bp);
    cert.trajectory.push_back(trial);
    if (trial.sup_ok && cert.delta1 == 0.0) cert.delta1 = delta;
    if (trial.decay_ok && cert.delta2 == 0.0) cert.delta2 = delta;
    if (trial.sup_ok && trial.decay_ok) {
      cert.delta = delta;
      cert.sup_u = trial.sup_u;
      cert.decay_coeff = trial.decay_coeff;
      u_final = std::move(u);
      bp_final = bp;
      found = true;
      break;
    }
  }
  if (!found)
    throw SearchExhausted("delta search exhausted after " +
                          std::to_string(settings.max_iters) + " shrink steps");
  const CertifyResult cr = certify_supersolution(u_final, freg, bp_final);
  cert.barrier_margin = cr.barrier_margin;
  cert.forcing_margin = cr.forcing_margin;
  cert.pass = cr.pass;
  return cert;
}

std::vector<DeltaTrial> delta_sweep(const Nonlinearity& f, const ProblemParams& params,
                                    std::span<const double> deltas, const RadialGrid& grid,
                                    const quad::QuadratureSpec& spec) {
  const auto crit = criterion::classify(f, params, spec);
  if (crit.verdict == criterion::Verdict::Diverges)
    throw CriterionDiverges("smallness criterion diverges: only the trivial solution exists");
  const Nonlinearity freg = criterion::regularize(f, params);
  std::vector<DeltaTrial> out;
  for (double d : deltas) {
    if (!(d > 0.0)) throw InvalidInput("delta sweep: deltas must be positive");
    out.push_back(run_trial(freg, params, d, grid, spec, nullptr, nullptr));
  }
  return out;
}

}  // namespace critlab::radial
