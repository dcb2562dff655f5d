#pragma once

#include <string>

#include "critlab/core.hpp"
#include "critlab/quad.hpp"

namespace critlab::criterion {

enum class Verdict { Converges, Diverges, Inconclusive };

const char* to_string(Verdict v);

// Outcome of the small-t integrability test of f(t) t^{-1-sigma} near 0.
// Converges carries the integral value; Inconclusive carries the exponent
// band that straddles sigma.
struct CriterionReport {
  Verdict verdict = Verdict::Inconclusive;
  double sigma = 0.0;
  double value = std::numeric_limits<double>::quiet_NaN();
  double exponent = std::numeric_limits<double>::quiet_NaN();  // fitted small-t slope
  double band_lo = std::numeric_limits<double>::quiet_NaN();
  double band_hi = std::numeric_limits<double>::quiet_NaN();
  std::string method;  // "analytic" | "dyadic"
};

// sigma = n (p-1)/(n-p); UnsupportedRegime unless n > p.
double critical_exponent(const ProblemParams& params);

// Classifies the integral of f(t) t^{-1-sigma} over (0, eps].  Power and
// power-log families are decided in closed form; everything else through a
// dyadic small-t exponent fit with an honest Inconclusive band.
CriterionReport classify(const Nonlinearity& f, const ProblemParams& params,
                         const quad::QuadratureSpec& spec = {});

// max{ f(t), t^{1+sigma} }: same smallness class, but bounded below by the
// growth floor the construction needs.
Nonlinearity regularize(const Nonlinearity& f, const ProblemParams& params);

}  // namespace critlab::criterion
