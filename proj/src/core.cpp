#include "critlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "critlab/errors.hpp"

namespace critlab {

// --- ProblemParams --------------------------------------------------------

ProblemParams::ProblemParams(int n_, double p_, double c1_, double c2_)
    : n(n_), p(p_), c1(c1_), c2(c2_) {
  if (n < 1) throw InvalidInput("ProblemParams: dimension n must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidInput("ProblemParams: growth exponent p must satisfy p > 1");
  if (!(c1 > 0.0) || !(c2 >= c1))
    throw InvalidInput("ProblemParams: ellipticity constants need 0 < c1 <= c2");
}

double ProblemParams::kappa() const {
  if (!supercritical())
    throw UnsupportedRegime("decay exponent undefined: requires n > p (got n = " +
                            std::to_string(n) + ", p = " + std::to_string(p) + ")");
  return (n - p) / (p - 1.0);
}

double ProblemParams::sigma() const {
  if (!supercritical())
    throw UnsupportedRegime("critical exponent undefined: requires n > p (got n = " +
                            std::to_string(n) + ", p = " + std::to_string(p) + ")");
  return n * (p - 1.0) / (n - p);
}

// --- operators ------------------------------------------------------------

OperatorDescriptor OperatorDescriptor::model() { return {ModelOperator{}}; }

OperatorDescriptor OperatorDescriptor::scaled(std::function<double(double)> coeff,
                                              std::string label) {
  return {ScaledOperator{std::move(coeff), std::move(label)}};
}

OperatorDescriptor OperatorDescriptor::custom(
    std::function<Vec(const Vec&, double, const Vec&)> eval, std::string label) {
  return {CustomOperator{std::move(eval), std::move(label)}};
}

OperatorDescriptor OperatorDescriptor::parse(const std::string& text) {
  if (text == "model") return model();
  if (text.rfind("scaled:", 0) == 0) {
    const std::string name = text.substr(7);
    if (name == "half")
      return scaled([](double) { return 0.5; }, "scaled:half");
    if (name == "ramp")
      return scaled([](double r) { return 1.0 + r / (1.0 + r); }, "scaled:ramp");
    if (name == "osc")
      return scaled([](double r) { return 1.5 + 0.5 * std::sin(r); }, "scaled:osc");
    throw InvalidInput("unknown scaled coefficient '" + name + "' (expected half|ramp|osc)");
  }
  throw InvalidInput("unknown operator descriptor '" + text + "' (expected model|scaled:<name>)");
}

std::string OperatorDescriptor::label() const {
  if (std::holds_alternative<ModelOperator>(kind)) return "model";
  if (const auto* s = std::get_if<ScaledOperator>(&kind)) return s->label;
  return std::get<CustomOperator>(kind).label;
}

Vec eval_operator(const OperatorDescriptor& op, const ProblemParams& params,
                  const Vec& x, double s, const Vec& xi) {
  if (x.size() != xi.size())
    throw InvalidInput("eval_operator: x and xi must have the same dimension");
  if (const auto* c = std::get_if<CustomOperator>(&op.kind)) {
    Vec out = c->eval(x, s, xi);
    if (!out.allFinite()) throw NonFinite("eval_operator: custom flux returned non-finite value");
    return out;
  }
  const double g = xi.norm();
  double mag = g > 0.0 ? std::pow(g, params.p - 2.0) : 0.0;
  if (const auto* sc = std::get_if<ScaledOperator>(&op.kind)) mag *= sc->coeff(x.norm());
  // p < 2 and xi = 0: the flux extends continuously by 0.
  if (g == 0.0) return Vec::Zero(xi.size());
  return mag * xi;
}

double eval_operator_radial(const OperatorDescriptor& op, const ProblemParams& params,
                            double r, double s, double g) {
  if (std::holds_alternative<CustomOperator>(op.kind)) {
    // Reduce through the vector interface along the first axis.
    const int n = params.n;
    Vec x = Vec::Zero(n), xi = Vec::Zero(n);
    x[0] = r;
    xi[0] = g;
    return eval_operator(op, params, x, s, xi)[0];
  }
  const double a = std::holds_alternative<ScaledOperator>(op.kind)
                       ? std::get<ScaledOperator>(op.kind).coeff(r)
                       : 1.0;
  if (g == 0.0) return 0.0;
  return a * std::pow(std::fabs(g), params.p - 2.0) * g;
}

StructureReport check_structure(const OperatorDescriptor& op, const ProblemParams& params,
                                const SamplingPlan& plan, double tol) {
  if (plan.count < 1) throw InvalidInput("check_structure: sample count must be positive");
  std::mt19937_64 rng(plan.seed);
  std::normal_distribution<double> gauss(0.0, plan.scale);
  const int n = params.n;
  auto draw = [&] {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
  };
  StructureReport rep;
  rep.samples = plan.count;
  rep.seed = plan.seed;
  double mono = std::numeric_limits<double>::infinity();
  double coer = std::numeric_limits<double>::infinity();
  double bnd = std::numeric_limits<double>::infinity();
  for (int k = 0; k < plan.count; ++k) {
    const Vec x = draw();
    const double s = std::fabs(gauss(rng));
    const Vec xi = draw();
    const Vec eta = draw();
    const Vec Axi = eval_operator(op, params, x, s, xi);
    const Vec Aeta = eval_operator(op, params, x, s, eta);
    mono = std::min(mono, (Axi - Aeta).dot(xi - eta));
    const double gn = xi.norm();
    coer = std::min(coer, Axi.dot(xi) - params.c1 * std::pow(gn, params.p));
    bnd = std::min(bnd, params.c2 * std::pow(gn, params.p - 1.0) - Axi.norm());
  }
  rep.monotonicity_margin = mono;
  rep.coercivity_margin = coer;
  rep.boundedness_margin = bnd;
  rep.pass = mono >= -tol && coer >= -tol && bnd >= -tol;
  return rep;
}

// --- nonlinearities -------------------------------------------------------

Nonlinearity Nonlinearity::power(double q, double eps) {
  if (!(q > 0.0)) throw InvalidInput("power nonlinearity: exponent q must be positive");
  if (!(eps > 0.0)) throw InvalidInput("nonlinearity: eps must be positive");
  return {PowerLaw{q}, eps};
}

Nonlinearity Nonlinearity::power_log(double q, double alpha, double eps) {
  if (!(q > 0.0)) throw InvalidInput("power-log nonlinearity: exponent q must be positive");
  if (!(alpha >= 0.0)) throw InvalidInput("power-log nonlinearity: alpha must be >= 0");
  if (!(eps > 0.0) || eps > std::exp(-1.0) * (1.0 + 1e-15))
    throw InvalidInput("power-log nonlinearity: requires 0 < eps <= 1/e");
  return {PowerLog{q, alpha}, eps};
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> t, std::vector<double> f) {
  if (t.size() != f.size() || t.size() < 2)
    throw InvalidInput("tabulated nonlinearity: needs >= 2 matching samples");
  for (size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(f[i]))
      throw InvalidInput("tabulated nonlinearity: non-finite sample");
    if (i == 0 && !(t[0] >= 0.0))
      throw InvalidInput("tabulated nonlinearity: abscissae start at t >= 0");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw InvalidInput("tabulated nonlinearity: abscissae must be strictly increasing");
    if (!(f[i] >= 0.0)) throw InvalidInput("tabulated nonlinearity: values must be nonnegative");
    if (i > 0 && f[i] < f[i - 1])
      throw InvalidInput("tabulated nonlinearity: values must be non-decreasing");
  }
  const double eps = t.back();
  return {TabulatedRule{std::move(t), std::move(f)}, eps};
}

Nonlinearity Nonlinearity::custom(std::function<double(double)> fn, double eps,
                                  std::string label) {
  if (!(eps > 0.0)) throw InvalidInput("nonlinearity: eps must be positive");
  return {CustomRule{std::move(fn), std::move(label)}, eps};
}

namespace {

std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open table file '" + path + "'");
  std::vector<double> t, f;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) continue;  // header row
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected two comma-separated columns");
    try {
      t.push_back(std::stod(a));
      f.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": cannot parse number");
    }
  }
  return {std::move(t), std::move(f)};
}

}  // namespace

Nonlinearity Nonlinearity::parse(const std::string& text, double eps) {
  auto split_args = [](const std::string& s) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InvalidInput("cannot parse numeric argument '" + tok + "'");
      }
    }
    return out;
  };
  if (text.rfind("power:", 0) == 0) {
    const auto a = split_args(text.substr(6));
    if (a.size() != 1) throw InvalidInput("power:<q> takes exactly one argument");
    return power(a[0], eps);
  }
  if (text.rfind("powerlog:", 0) == 0) {
    const auto a = split_args(text.substr(9));
    if (a.size() != 2) throw InvalidInput("powerlog:<q>,<alpha> takes exactly two arguments");
    return power_log(a[0], a[1], eps);
  }
  if (text.rfind("table:", 0) == 0) {
    auto [t, f] = read_table_csv(text.substr(6));
    return tabulated(std::move(t), std::move(f));
  }
  throw InvalidInput("unknown nonlinearity descriptor '" + text +
                     "' (expected power:q | powerlog:q,alpha | table:<path>)");
}

std::string Nonlinearity::label() const {
  std::ostringstream os;
  if (const auto* p = std::get_if<PowerLaw>(&kind))
    os << "power:" << p->q;
  else if (const auto* pl = std::get_if<PowerLog>(&kind))
    os << "powerlog:" << pl->q << "," << pl->alpha;
  else if (std::holds_alternative<TabulatedRule>(kind))
    os << "table[" << std::get<TabulatedRule>(kind).t.size() << "]";
  else if (const auto* c = std::get_if<CustomRule>(&kind))
    os << c->label;
  else
    os << "floored(" << std::get<GrowthFloored>(kind).base->label() << ")";
  return os.str();
}

double eval_nonlinearity(const Nonlinearity& f, double t) {
  if (std::isnan(t) || t < 0.0 || t > f.eps * (1.0 + 1e-12))
    throw DomainError("nonlinearity evaluated outside [0, eps]: t = " + std::to_string(t) +
                      ", eps = " + std::to_string(f.eps));
  t = std::min(t, f.eps);
  if (const auto* p = std::get_if<PowerLaw>(&f.kind))
    return t == 0.0 ? 0.0 : std::pow(t, p->q);
  if (const auto* pl = std::get_if<PowerLog>(&f.kind)) {
    if (t == 0.0) return 0.0;
    return std::pow(t, pl->q) * std::pow(-std::log(t), -pl->alpha);
  }
  if (const auto* tab = std::get_if<TabulatedRule>(&f.kind)) {
    const auto& ts = tab->t;
    const auto& fs = tab->f;
    if (t <= ts.front()) {
      // Extend linearly down to f(0) = 0 below the first sample.
      return ts.front() == 0.0 ? fs.front() : fs.front() * (t / ts.front());
    }
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const size_t j = std::min<size_t>(it - ts.begin(), ts.size() - 1);
    const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
    return fs[j - 1] + w * (fs[j] - fs[j - 1]);
  }
  if (const auto* c = std::get_if<CustomRule>(&f.kind)) {
    const double v = c->fn(t);
    if (!std::isfinite(v)) throw NonFinite("custom nonlinearity returned non-finite value");
    return v;
  }
  const auto& fl = std::get<GrowthFloored>(f.kind);
  const double base = eval_nonlinearity(*fl.base, t);
  const double floor = t == 0.0 ? 0.0 : std::pow(t, fl.growth);
  return std::max(base, floor);
}

// --- grids ----------------------------------------------------------------

void RadialGrid::validate() const {
  if (size() < 2) throw MeshInvalid("grid needs at least 2 nodes");
  if (nodes[0] != 0.0) throw MeshInvalid("grid must start at r = 0");
  for (int i = 1; i < size(); ++i)
    if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i]))
      throw MeshInvalid("grid nodes must be finite and strictly increasing");
}

int RadialGrid::cell_of(double r) const {
  const int nc = cells();
  if (r <= 0.0) return 0;
  if (r >= nodes[nc]) return nc - 1;
  const double* begin = nodes.data();
  const double* pos = std::upper_bound(begin, begin + size(), r);
  return static_cast<int>(pos - begin) - 1;
}

RadialGrid RadialGrid::uniform(double r_max, int cells) {
  if (cells < 1 || !(r_max > 0.0)) throw MeshInvalid("uniform grid: needs r_max > 0, cells >= 1");
  RadialGrid g;
  g.nodes = Eigen::ArrayXd::LinSpaced(cells + 1, 0.0, r_max);
  g.nodes[0] = 0.0;
  g.nodes[cells] = r_max;
  return g;
}

RadialGrid RadialGrid::composite(int near_cells, double near_end, double ratio, double r_max) {
  if (near_cells < 1 || !(near_end > 0.0) || !(ratio > 1.0) || !(r_max > near_end))
    throw MeshInvalid("composite grid: invalid parameters");
  std::vector<double> ns;
  const double h = near_end / near_cells;
  for (int i = 0; i <= near_cells; ++i) ns.push_back(h * i);
  ns[0] = 0.0;
  ns[near_cells] = near_end;
  double step = h * ratio;
  double r = near_end;
  while (r < r_max) {
    r = std::min(r + step, r_max);
    ns.push_back(r);
    step *= ratio;
  }
  RadialGrid g;
  g.nodes = Eigen::Map<Eigen::ArrayXd>(ns.data(), ns.size());
  g.validate();
  return g;
}

RadialGrid RadialGrid::with_nodes(std::span<const double> extra) const {
  std::vector<double> ns(nodes.data(), nodes.data() + size());
  for (double r : extra)
    if (r > 0.0 && r < r_max()) ns.push_back(r);
  std::sort(ns.begin(), ns.end());
  // Drop near-duplicates (relative distance below 1e-12).
  std::vector<double> out{ns[0]};
  for (double r : ns)
    if (r - out.back() > 1e-12 * std::max(1.0, r)) out.push_back(r);
  RadialGrid g;
  g.nodes = Eigen::Map<Eigen::ArrayXd>(out.data(), out.size());
  g.validate();
  return g;
}

// --- profiles -------------------------------------------------------------

void RadialProfile::validate() const {
  grid.validate();
  if (values.size() != grid.nodes.size())
    throw MeshInvalid("profile values do not match grid size");
  if (!values.isFinite().all()) throw NonFinite("profile contains non-finite values");
}

double RadialProfile::operator()(double r) const {
  if (r <= 0.0) return values[0];
  if (r >= grid.r_max()) return values[values.size() - 1];
  const int i = grid.cell_of(r);
  const double r0 = grid.nodes[i], r1 = grid.nodes[i + 1];
  const double w = (r - r0) / (r1 - r0);
  return values[i] + w * (values[i + 1] - values[i]);
}

// --- forcing --------------------------------------------------------------

double Forcing::operator()(double r) const {
  if (std::isnan(r) || r < 0.0) throw DomainError("forcing evaluated at negative radius");
  if (r > support_radius) return 0.0;
  const double v = eval(r);
  if (!std::isfinite(v)) throw NonFinite("forcing not finite at r = " + std::to_string(r));
  return v;
}

Forcing Forcing::zero() {
  return {[](double) { return 0.0; }, 0.0, {}, "zero"};
}

Forcing Forcing::indicator(double radius) {
  if (!(radius > 0.0)) throw InvalidInput("indicator forcing: radius must be positive");
  return {[radius](double r) { return r <= radius ? 1.0 : 0.0; }, radius, {radius},
          "indicator:" + std::to_string(radius)};
}

Forcing Forcing::power_tail(double beta) {
  if (!(beta > 0.0)) throw InvalidInput("power-tail forcing: beta must be positive");
  return {[beta](double r) { return std::pow(1.0 + r, -beta); },
          std::numeric_limits<double>::infinity(),
          {},
          "powtail:" + std::to_string(beta)};
}

Forcing Forcing::from_profile(RadialProfile profile) {
  profile.validate();
  if ((profile.values < 0.0).any())
    throw InvalidInput("forcing profile must be nonnegative");
  const double support = profile.grid.r_max();
  auto prof = std::make_shared<RadialProfile>(std::move(profile));
  return {[prof](double r) { return r > prof->grid.r_max() ? 0.0 : (*prof)(r); }, support,
          {support}, "profile"};
}

Forcing Forcing::parse(const std::string& text) {
  if (text == "zero") return zero();
  if (text == "indicator") return indicator(1.0);
  if (text.rfind("indicator:", 0) == 0) {
    try {
      return indicator(std::stod(text.substr(10)));
    } catch (const InvalidInput&) {
      throw;
    } catch (const std::exception&) {
      throw InvalidInput("indicator:<R> needs a numeric radius");
    }
  }
  if (text.rfind("powtail:", 0) == 0) {
    try {
      return power_tail(std::stod(text.substr(8)));
    } catch (const InvalidInput&) {
      throw;
    } catch (const std::exception&) {
      throw InvalidInput("powtail:<beta> needs a numeric exponent");
    }
  }
  if (text.rfind("table:", 0) == 0) {
    auto [t, f] = read_table_csv(text.substr(6));
    if (t.empty()) throw InvalidInput("forcing table is empty");
    RadialProfile prof;
    prof.grid.nodes = Eigen::Map<Eigen::ArrayXd>(t.data(), t.size());
    prof.values = Eigen::Map<Eigen::ArrayXd>(f.data(), f.size());
    return from_profile(std::move(prof));
  }
  throw InvalidInput("unknown forcing descriptor '" + text +
                     "' (expected indicator[:R] | powtail:beta | table:<path> | zero)");
}

}  // namespace critlab
