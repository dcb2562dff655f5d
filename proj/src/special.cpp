#include "critlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "critlab/errors.hpp"

namespace critlab {

double sphere_area(int n) {
  if (n < 1) throw InvalidInput("sphere_area: dimension must be >= 1, got " + std::to_string(n));
  const double pi = 4.0 * std::atan(1.0);
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) return h;
  }
  throw NonFinite("ibeta_reg: continued fraction failed to converge");
}

}  // namespace

double ibeta_reg(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("ibeta_reg: requires a, b > 0");
  if (std::isnan(x)) throw InvalidInput("ibeta_reg: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lnbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(lnbt);
  if (x < (a + 1.0) / (a + b + 2.0))
    return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double cap_fraction(int n, double cos_theta) {
  if (n < 2) throw InvalidInput("cap_fraction: dimension must be >= 2");
  const double c = std::clamp(cos_theta, -1.0, 1.0);
  if (n == 2) return std::acos(c) / (4.0 * std::atan(1.0));  // arc fraction theta/pi
  if (n == 3) return 0.5 * (1.0 - c);
  const double z = 1.0 - c * c;  // sin^2 theta
  const double half = 0.5 * ibeta_reg(0.5 * (n - 1), 0.5, z);
  return c >= 0.0 ? half : 1.0 - half;
}

}  // namespace critlab
