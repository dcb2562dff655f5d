#include "critlab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "critlab/errors.hpp"

namespace critlab::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;  // K15 estimate
  double err;    // |K15 - G7|
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.a > y.a;  // deterministic tie-break
  }
};

double eval_checked(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw NonFinite("integrand not finite at x = " + std::to_string(x));
  return v;
}

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  const double fc = eval_checked(f, c);
  k += wgk[7] * fc;
  g += wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double f1 = eval_checked(f, c - dx);
    const double f2 = eval_checked(f, c + dx);
    k += wgk[j] * (f1 + f2);
    if (j % 2 == 1) g += wg[j / 2] * (f1 + f2);
  }
  return Panel{a, b, k * h, std::fabs((k - g) * h)};
}

// Compensated (Neumaier) summation.
double neumaier_sum(const std::vector<double>& xs) {
  double s = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = s + x;
    comp += (std::fabs(s) >= std::fabs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + comp;
}

QuadResult adaptive(const std::function<double(double)>& f, std::vector<Panel> init,
                    const QuadratureSpec& spec) {
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  std::vector<Panel> frozen;  // panels too thin to split further
  double total_value = 0.0, total_err = 0.0;
  for (const Panel& p : init) {
    total_value += p.value;
    total_err += p.err;
    heap.push(p);
  }
  int panels = static_cast<int>(init.size());
  const double eps = std::numeric_limits<double>::epsilon();

  auto done = [&] {
    return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total_value));
  };

  while (!done() && !heap.empty() && panels < spec.max_subdivisions) {
    Panel p = heap.top();
    heap.pop();
    // Representability floor: scales with the endpoints so cascades toward
    // zero can keep halving (their floor shrinks with them).
    const double width_floor = std::max(
        50.0 * eps * std::max(std::fabs(p.a), std::fabs(p.b)), 1e-280);
    if (p.b - p.a <= width_floor) {
      frozen.push_back(p);  // cannot be resolved further; keep its estimate
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    Panel l = gk15(f, p.a, m), r = gk15(f, m, p.b);
    total_value += l.value + r.value - p.value;
    total_err += l.err + r.err - p.err;
    heap.push(l);
    heap.push(r);
    ++panels;
  }

  std::vector<Panel> all(std::move(frozen));
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> vals, errs;
  vals.reserve(all.size());
  errs.reserve(all.size());
  for (const Panel& p : all) {
    vals.push_back(p.value);
    errs.push_back(p.err);
  }
  QuadResult res{neumaier_sum(vals), neumaier_sum(errs), panels};
  if (!(res.error_estimate <=
        std::max(spec.abs_tol, spec.rel_tol * std::fabs(res.value))))
    throw NonConvergence("quadrature budget of " + std::to_string(spec.max_subdivisions) +
                             " panels exhausted (error estimate " +
                             std::to_string(res.error_estimate) + ")",
                         res.value, res.error_estimate);
  return res;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
  return integrate_split(f, a, b, {}, spec);
}

QuadResult integrate_split(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> splits, const QuadratureSpec& spec) {
  if (!std::isfinite(a)) throw InvalidInput("integrate: lower limit must be finite");
  if (std::isnan(b)) throw InvalidInput("integrate: upper limit is NaN");
  if (!(a <= b)) throw InvalidInput("integrate: requires a <= b");
  if (a == b) return {0.0, 0.0, 0};

  std::vector<double> pts{a};
  for (double s : splits)
    if (s > a && s < b && std::isfinite(s)) pts.push_back(s);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Panel> init;
  if (std::isinf(b)) {
    // Finite pieces up to the last split, then map [r0, inf) onto [0, 1)
    // via r = r0 + s/(1-s).  The mapped piece is handled in a shifted
    // coordinate x = r0 + s so all panels share one ordered axis; the
    // integrand dispatches on which side of r0 a point lies.  GK nodes are
    // interior, so s = 1 is never evaluated.
    const double r0 = pts.back();
    std::function<double(double)> piecewise = [f, r0](double x) {
      if (x < r0) return f(x);
      // Nodes of panels hugging s = 1 can round onto the endpoint itself;
      // clamping the distance at a fraction of an ulp keeps the map finite
      // (the point then probes r ~ 4/eps instead of dividing zero by zero).
      const double om = std::max(1.0 - (x - r0), std::numeric_limits<double>::epsilon() / 4.0);
      return f(r0 + (x - r0) / om) / (om * om);
    };
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      init.push_back(gk15(piecewise, pts[i], pts[i + 1]));
    init.push_back(gk15(piecewise, r0, r0 + 1.0));
    return adaptive(piecewise, std::move(init), spec);
  }
  pts.push_back(b);
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    init.push_back(gk15(f, pts[i], pts[i + 1]));
  return adaptive(f, std::move(init), spec);
}

TailFit classify_tail(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw InvalidInput("classify_tail: sample arrays differ in size");
  const size_t n = t.size();
  if (n < 8) throw InvalidInput("classify_tail: needs at least 8 samples");
  for (size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || !std::isfinite(t[i]))
      throw InvalidInput("classify_tail: abscissae must be positive finite");
    if (i > 0 && !(t[i] < t[i - 1]))
      throw InvalidInput("classify_tail: abscissae must be strictly decreasing");
    if (!std::isfinite(f[i])) throw NonFinite("classify_tail: sample not finite");
    if (!(f[i] > 0.0)) throw ZeroSamples("classify_tail: sample " + std::to_string(i) + " is not positive");
  }
  // Fit over the latter (small-t) half; at least 4 points.
  const size_t w = std::max<size_t>(4, n / 2);
  const size_t lo = n - w;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = lo; i < n; ++i) {
    const double x = std::log(t[i]), y = std::log(f[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(w);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double band = 0.0;
  for (size_t i = lo; i + 1 < n; ++i) {
    const double local = (std::log(f[i + 1]) - std::log(f[i])) /
                         (std::log(t[i + 1]) - std::log(t[i]));
    band = std::max(band, std::fabs(local - slope));
  }
  return TailFit{slope, band};
}

}  // namespace critlab::quad
