#include "critlab/criterion.hpp"

#include <cmath>

#include "critlab/errors.hpp"

namespace critlab::criterion {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::Diverges: return "diverges";
    default: return "inconclusive";
  }
}

double critical_exponent(const ProblemParams& params) { return params.sigma(); }

namespace {

// Number of dyadic samples t_i = eps 2^{-i} for the exponent fit, and the
// cut below which the remaining mass is estimated from the fitted power.
constexpr int kDyadicSamples = 48;
constexpr int kCutExponent = 52;
// Exponent fits closer to sigma than this are never trusted.
constexpr double kBandFloor = 0.05;

// Integrand f(t) t^{-1-sigma} in log space (safe for large sigma).
double weighted(const Nonlinearity& f, double sigma, double t) {
  const double v = eval_nonlinearity(f, t);
  if (v <= 0.0) return 0.0;
  return std::exp(std::log(v) - (1.0 + sigma) * std::log(t));
}

CriterionReport classify_numeric(const Nonlinearity& f, double sigma,
                                 const quad::QuadratureSpec& spec) {
  CriterionReport rep;
  rep.sigma = sigma;
  rep.method = "dyadic";

  std::vector<double> ts(kDyadicSamples), fs(kDyadicSamples);
  for (int i = 0; i < kDyadicSamples; ++i) {
    ts[i] = std::ldexp(f.eps, -i);
    fs[i] = eval_nonlinearity(f, ts[i]);
  }
  // f is non-decreasing and samples are ordered by decreasing t, so positive
  // samples form a prefix; everything past it is zero.
  int positive_depth = 0;
  while (positive_depth < kDyadicSamples && fs[positive_depth] > 0.0) ++positive_depth;

  if (positive_depth == 0) {
    // f vanishes at eps, hence everywhere below by monotonicity.
    rep.verdict = Verdict::Converges;
    rep.value = 0.0;
    return rep;
  }
  if (positive_depth < kDyadicSamples) {
    // f vanishes on [0, t_z]: the integral reduces to a finite range.
    const double tz = ts[positive_depth];
    rep.verdict = Verdict::Converges;
    rep.value = quad::integrate([&](double t) { return weighted(f, sigma, t); }, tz,
                                f.eps, spec)
                    .value;
    return rep;
  }

  const auto fit = quad::classify_tail(ts, fs);
  rep.exponent = fit.exponent;
  const double w = std::max(fit.band, kBandFloor);
  rep.band_lo = fit.exponent - w;
  rep.band_hi = fit.exponent + w;
  if (fit.exponent > sigma + w) {
    rep.verdict = Verdict::Converges;
    const double t_min = std::ldexp(f.eps, -kCutExponent);
    const double body =
        quad::integrate([&](double t) { return weighted(f, sigma, t); }, t_min, f.eps, spec)
            .value;
    // Remaining mass below t_min from the fitted power: f ~ c t^rho gives
    // int_0^{t_min} ~ f(t_min) t_min^{-sigma} / (rho - sigma).
    const double fmin = eval_nonlinearity(f, t_min);
    const double rem =
        fmin > 0.0
            ? std::exp(std::log(fmin) - sigma * std::log(t_min)) / (fit.exponent - sigma)
            : 0.0;
    rep.value = body + rem;
  } else if (fit.exponent < sigma - w) {
    rep.verdict = Verdict::Diverges;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace

CriterionReport classify(const Nonlinearity& f, const ProblemParams& params,
                         const quad::QuadratureSpec& spec) {
  const double sigma = params.sigma();
  const double tol = 1e-12 * std::max(1.0, sigma);

  if (const auto* p = std::get_if<PowerLaw>(&f.kind)) {
    CriterionReport rep;
    rep.sigma = sigma;
    rep.method = "analytic";
    rep.exponent = p->q;
    if (p->q > sigma + tol) {
      rep.verdict = Verdict::Converges;
      rep.value = std::pow(f.eps, p->q - sigma) / (p->q - sigma);
    } else {
      rep.verdict = Verdict::Diverges;
    }
    return rep;
  }
  if (const auto* pl = std::get_if<PowerLog>(&f.kind)) {
    CriterionReport rep;
    rep.sigma = sigma;
    rep.method = "analytic";
    rep.exponent = pl->q;
    if (pl->q > sigma + tol) {
      rep.verdict = Verdict::Converges;
      const double t_min = std::ldexp(f.eps, -kCutExponent);
      const double body =
          quad::integrate([&](double t) { return weighted(f, sigma, t); }, t_min, f.eps, spec)
              .value;
      const double rem = std::exp(std::log(eval_nonlinearity(f, t_min)) -
                                  sigma * std::log(t_min)) /
                         (pl->q - sigma);
      rep.value = body + rem;
    } else if (std::fabs(pl->q - sigma) <= tol && pl->alpha > 1.0) {
      // int_0^eps |ln t|^{-alpha} dt/t = (-ln eps)^{1-alpha}/(alpha-1).
      rep.verdict = Verdict::Converges;
      rep.value = std::pow(-std::log(f.eps), 1.0 - pl->alpha) / (pl->alpha - 1.0);
    } else {
      rep.verdict = Verdict::Diverges;
    }
    return rep;
  }
  return classify_numeric(f, sigma, spec);
}

Nonlinearity regularize(const Nonlinearity& f, const ProblemParams& params) {
  const double growth = 1.0 + params.sigma();
  Nonlinearity out;
  out.kind = GrowthFloored{std::make_shared<Nonlinearity>(f), growth};
  out.eps = f.eps;
  return out;
}

}  // namespace critlab::criterion
