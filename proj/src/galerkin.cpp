#include "critlab/galerkin.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "critlab/errors.hpp"
#include "critlab/special.hpp"

namespace critlab::galerkin {

namespace {

// 4-point Gauss rule on [-1, 1]; exact through degree 7, so the r^{n-1}
// element weights are exact for n <= 8.
constexpr double gx[4] = {-0.861136311594052575224, -0.339981043584856264803,
                          0.339981043584856264803, 0.861136311594052575224};
constexpr double gw[4] = {0.347854845137453857373, 0.652145154862546142627,
                          0.652145154862546142627, 0.347854845137453857373};

double coeff_at(const OperatorDescriptor& op, double r) {
  if (const auto* s = std::get_if<ScaledOperator>(&op.kind)) return s->coeff(r);
  return 1.0;
}

// Regularized flux magnitude psi(g) = (e^2 + g^2)^{(p-2)/2} g and its
// derivative W(g) = (e^2 + g^2)^{(p-4)/2} (e^2 + (p-1) g^2) > 0.
double psi_reg(double p, double eps, double g) {
  if (eps == 0.0) return g == 0.0 ? 0.0 : std::pow(std::fabs(g), p - 2.0) * g;
  return std::pow(eps * eps + g * g, 0.5 * (p - 2.0)) * g;
}

double dpsi_reg(double p, double eps, double g) {
  const double s = eps * eps + g * g;
  if (s == 0.0) return 0.0;
  return std::pow(s, 0.5 * (p - 4.0)) * (eps * eps + (p - 1.0) * g * g);
}

// (e^2 + g^2)^{p/2} - e^p: regularized |g|^p with the constant removed so
// the eps -> 0 limit matches the plain energy density.
double phi_reg(double p, double eps, double g) {
  if (eps == 0.0) return std::pow(std::fabs(g), p);
  return std::pow(eps * eps + g * g, 0.5 * p) - std::pow(eps, p);
}

}  // namespace

DiscreteSystem assemble(const RadialFemSpace& space, const OperatorDescriptor& op,
                        const Forcing& F, const ProblemParams& params) {
  space.mesh.validate();
  if (!(space.boundary_value >= 0.0) || !std::isfinite(space.boundary_value))
    throw InvalidInput("assemble: boundary value must be finite and >= 0");
  const int E = space.mesh.cells();
  DiscreteSystem sys;
  sys.space = space;
  sys.params = params;
  sys.op = op;
  sys.variational = op.is_variational();
  sys.coeff_weight.setZero(E);
  sys.volume_weight.setZero(E);
  sys.load.setZero(E + 1);

  double mass_in = 0.0;  // int_0^R t^{n-1} F dt by the same element rule
  for (int e = 0; e < E; ++e) {
    const double a = space.mesh.nodes[e], b = space.mesh.nodes[e + 1];
    const double h = b - a, mid = 0.5 * (a + b);
    for (int q = 0; q < 4; ++q) {
      const double r = mid + 0.5 * h * gx[q];
      const double w = 0.5 * h * gw[q];
      const double rn = std::pow(r, params.n - 1.0);
      const double Fv = F(r);
      sys.coeff_weight[e] += w * coeff_at(op, r) * rn;
      sys.volume_weight[e] += w * rn;
      const double hatR = (r - a) / h;
      sys.load[e] += w * Fv * rn * (1.0 - hatR);
      sys.load[e + 1] += w * Fv * rn * hatR;
      mass_in += w * Fv * rn;
    }
  }
  // Dirichlet truncation: the whole-space decaying solution is still
  // ~ M^{1/(p-1)} R^{-kappa} (p-1)/(n-p) at R; that value is the committed
  // boundary error when solving with u(R) = 0.
  if (params.supercritical() && mass_in > 0.0)
    sys.truncation_estimate = std::pow(mass_in, 1.0 / (params.p - 1.0)) *
                              std::pow(space.R(), -params.kappa()) / params.kappa();
  return sys;
}

namespace {

// Flux integral over element e at slope g, solution values taken from u.
double element_flux(const DiscreteSystem& sys, const Eigen::ArrayXd& u, int e, double g,
                    double eps_reg) {
  if (sys.variational) return sys.coeff_weight[e] * psi_reg(sys.params.p, eps_reg, g);
  const double a = sys.space.mesh.nodes[e], b = sys.space.mesh.nodes[e + 1];
  const double h = b - a, mid = 0.5 * (a + b);
  double flux = 0.0;
  for (int q = 0; q < 4; ++q) {
    const double r = mid + 0.5 * h * gx[q];
    const double w = 0.5 * h * gw[q];
    const double hatR = (r - a) / h;
    const double s = u[e] * (1.0 - hatR) + u[e + 1] * hatR;
    flux += w * std::pow(r, sys.params.n - 1.0) *
            eval_operator_radial(sys.op, sys.params, r, s, g);
  }
  return flux;
}

double element_dflux(const DiscreteSystem& sys, const Eigen::ArrayXd& u, int e, double g,
                     double eps_reg) {
  if (sys.variational) return sys.coeff_weight[e] * dpsi_reg(sys.params.p, eps_reg, g);
  const double dg = 1e-6 * std::max(1.0, std::fabs(g));
  return (element_flux(sys, u, e, g + dg, eps_reg) -
          element_flux(sys, u, e, g - dg, eps_reg)) /
         (2.0 * dg);
}

}  // namespace

Eigen::ArrayXd DiscreteSystem::residual(const Eigen::ArrayXd& u_in, double eps_reg) const {
  const int N = space.unknowns();
  Eigen::ArrayXd u = u_in;
  if (u.size() != N + 1) throw InvalidInput("residual: nodal vector has wrong size");
  u[N] = space.boundary_value;
  Eigen::ArrayXd R(N);
  const auto& nodes = space.mesh.nodes;
  Eigen::ArrayXd flux(space.mesh.cells());
  for (int e = 0; e < space.mesh.cells(); ++e) {
    const double h = nodes[e + 1] - nodes[e];
    flux[e] = element_flux(*this, u, e, (u[e + 1] - u[e]) / h, eps_reg);
  }
  for (int i = 0; i < N; ++i) {
    double r = -load[i];
    if (i > 0) r += flux[i - 1] / (nodes[i] - nodes[i - 1]);
    r -= flux[i] / (nodes[i + 1] - nodes[i]);
    R[i] = r;
  }
  return R;
}

double DiscreteSystem::energy(const Eigen::ArrayXd& u_in, double eps_reg) const {
  if (!variational) return std::numeric_limits<double>::quiet_NaN();
  const int N = space.unknowns();
  Eigen::ArrayXd u = u_in;
  u[N] = space.boundary_value;
  const auto& nodes = space.mesh.nodes;
  double J = 0.0;
  for (int e = 0; e < space.mesh.cells(); ++e) {
    const double h = nodes[e + 1] - nodes[e];
    const double g = (u[e + 1] - u[e]) / h;
    J += coeff_weight[e] * phi_reg(params.p, eps_reg, g) / params.p;
  }
  for (int i = 0; i <= N; ++i) J -= load[i] * u[i];
  return J;
}

GalerkinSolution solve_system(const DiscreteSystem& sys, const SolverSettings& settings) {
  const int N = sys.space.unknowns();
  const int E = sys.space.mesh.cells();
  const auto& nodes = sys.space.mesh.nodes;
  using Sparse = Eigen::SparseMatrix<double>;

  auto solve_tridiag = [&](const Eigen::ArrayXd& k, const Eigen::ArrayXd& rhs) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * N);
    for (int i = 0; i < N; ++i) {
      double diag = k[i];
      if (i > 0) {
        diag += k[i - 1];
        trip.emplace_back(i, i - 1, -k[i - 1]);
        trip.emplace_back(i - 1, i, -k[i - 1]);
      }
      trip.emplace_back(i, i, diag);
    }
    Sparse H(N, N);
    H.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Sparse> ldlt(H);
    if (ldlt.info() != Eigen::Success)
      throw NumericError("Newton system factorization failed");
    Eigen::VectorXd d = ldlt.solve(rhs.matrix());
    if (!d.allFinite()) throw NumericError("Newton step is not finite");
    return Eigen::ArrayXd(d.array());
  };

  // Warm start: the p = 2 (unit-weight) linear problem.
  Eigen::ArrayXd u(N + 1);
  u.setZero();
  u[N] = sys.space.boundary_value;
  {
    Eigen::ArrayXd k(E);
    for (int e = 0; e < E; ++e)
      k[e] = sys.coeff_weight[e] / std::pow(nodes[e + 1] - nodes[e], 2);
    Eigen::ArrayXd rhs(N);
    for (int i = 0; i < N; ++i) {
      rhs[i] = sys.load[i];
      if (i + 1 == N) rhs[i] += k[E - 1] * sys.space.boundary_value;
    }
    const Eigen::ArrayXd x = solve_tridiag(k, rhs);
    u.head(N) = x;
  }

  const bool linear = sys.variational && sys.params.p == 2.0;
  std::vector<double> ladder =
      linear ? std::vector<double>{0.0} : settings.continuation;
  if (ladder.empty()) ladder.push_back(0.0);

  GalerkinSolution sol;
  int total_iters = 0;
  for (size_t stage = 0; stage < ladder.size(); ++stage) {
    const double eps_reg = ladder[stage];
    const bool last = stage + 1 == ladder.size();
    const double stage_tol = last ? settings.tol : std::max(settings.tol, 1e-8);
    Eigen::ArrayXd R = sys.residual(u, eps_reg);
    double rnorm = R.abs().maxCoeff();
    sol.residual_trace.push_back(rnorm);
    while (rnorm > stage_tol) {
      if (++total_iters > settings.max_iter)
        throw NoConvergence("Newton exceeded " + std::to_string(settings.max_iter) +
                                " iterations (residual " + std::to_string(rnorm) + ")",
                            sol.residual_trace);
      Eigen::ArrayXd k(E);
      for (int e = 0; e < E; ++e) {
        const double h = nodes[e + 1] - nodes[e];
        const double g = (u[e + 1] - u[e]) / h;
        k[e] = element_dflux(sys, u, e, g, eps_reg) / (h * h);
        if (!(k[e] > 0.0)) k[e] = std::max(k[e], 1e-300);
      }
      const Eigen::ArrayXd d = solve_tridiag(k, -R);
      // Backtracking line search: energy descent when variational,
      // residual descent otherwise.
      const double J0 = sys.variational ? sys.energy(u, eps_reg) : 0.0;
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 40 && !accepted; ++ls, t *= 0.5) {
        Eigen::ArrayXd u_try = u;
        u_try.head(N) += t * d;
        Eigen::ArrayXd R_try = sys.residual(u_try, eps_reg);
        const double r_try = R_try.abs().maxCoeff();
        const bool ok =
            sys.variational
                ? (sys.energy(u_try, eps_reg) <= J0 + 1e-14 * std::fabs(J0) || r_try < rnorm)
                : r_try < rnorm;
        if (ok && std::isfinite(r_try)) {
          u = u_try;
          R = R_try;
          rnorm = r_try;
          accepted = true;
        }
      }
      if (!accepted)
        throw LineSearchStall("line search stalled at residual " + std::to_string(rnorm));
      sol.residual_trace.push_back(rnorm);
    }
  }

  sol.profile.grid = sys.space.mesh;
  sol.profile.values = u;
  sol.energy = sys.energy(u, 0.0);
  sol.residual_norm = sys.residual(u, ladder.back()).abs().maxCoeff();
  sol.iterations = total_iters;
  return sol;
}

std::vector<CoercivityProbe> coercivity_probe(const DiscreteSystem& sys,
                                              std::span<const double> lambdas) {
  const auto& nodes = sys.space.mesh.nodes;
  const int E = sys.space.mesh.cells();
  const double R = sys.space.R();
  const double S = sphere_area(sys.params.n);
  // Probe direction: the decaying hat interpolant of 1 - r/R (vanishes at R).
  Eigen::ArrayXd v(E + 1);
  for (int i = 0; i <= E; ++i) v[i] = 1.0 - nodes[i] / R;
  v[E] = 0.0;
  std::vector<CoercivityProbe> rows;
  for (double lam : lambdas) {
    if (!(lam > 0.0)) throw InvalidInput("coercivity probe: lambda must be positive");
    Eigen::ArrayXd w = lam * v;
    CoercivityProbe row;
    row.lambda = lam;
    for (int e = 0; e < E; ++e) {
      const double h = nodes[e + 1] - nodes[e];
      const double g = (w[e + 1] - w[e]) / h;
      row.seminorm_p += S * sys.volume_weight[e] * std::pow(std::fabs(g), sys.params.p);
      row.pairing += S * element_flux(sys, w, e, g, 0.0) * g;
    }
    row.ratio = row.seminorm_p > 0.0 ? row.pairing / row.seminorm_p
                                     : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

HardyReport hardy_check(const RadialProfile& u, const ProblemParams& params,
                        const quad::QuadratureSpec& spec) {
  u.validate();
  if (!params.supercritical())
    throw UnsupportedRegime("Hardy inequality requires n > p");
  const double p = params.p;
  const double S = sphere_area(params.n);
  double lhs = 0.0, rhs = 0.0;
  for (int e = 0; e + 1 < u.grid.size(); ++e) {
    const double a = u.grid.nodes[e], b = u.grid.nodes[e + 1];
    const double g = (u.values[e + 1] - u.values[e]) / (b - a);
    lhs += S *
           quad::integrate(
               [&](double r) {
                 return r == 0.0 ? 0.0
                                 : std::pow(std::fabs(u(r)), p) * std::pow(r, params.n - 1.0 - p);
               },
               a, b, spec)
               .value;
    rhs += S * std::pow(std::fabs(g), p) *
           quad::integrate([&](double r) { return std::pow(r, params.n - 1.0); }, a, b, spec)
               .value;
  }
  HardyReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.sharp_constant = std::pow(p / (params.n - p), p);
  if (rhs == 0.0 && lhs > 0.0)
    throw DivergentNorm("Hardy ratio undefined: profile has zero gradient but nonzero values");
  rep.ratio = rhs == 0.0 ? 0.0 : lhs / rhs;
  return rep;
}

HardyReport hardy_check(const AnalyticProfile& u, const ProblemParams& params,
                        const quad::QuadratureSpec& spec) {
  if (!params.supercritical())
    throw UnsupportedRegime("Hardy inequality requires n > p");
  const double p = params.p;
  const double S = sphere_area(params.n);
  const double top = std::isfinite(u.support) ? u.support
                                              : std::numeric_limits<double>::infinity();
  HardyReport rep;
  try {
    rep.lhs = S *
              quad::integrate(
                  [&](double r) {
                    return r == 0.0
                               ? 0.0
                               : std::pow(std::fabs(u.u(r)), p) * std::pow(r, params.n - 1.0 - p);
                  },
                  0.0, top, spec)
                  .value;
    rep.rhs = S *
              quad::integrate(
                  [&](double r) {
                    return r == 0.0 ? 0.0
                                    : std::pow(std::fabs(u.du(r)), p) * std::pow(r, params.n - 1.0);
                  },
                  0.0, top, spec)
                  .value;
  } catch (const NonConvergence& e) {
    throw DivergentNorm("Hardy norm integral did not converge (estimate " +
                        std::to_string(e.value) + ")");
  }
  rep.sharp_constant = std::pow(p / (params.n - p), p);
  if (rep.rhs == 0.0 && rep.lhs > 0.0)
    throw DivergentNorm("Hardy ratio undefined: profile has zero gradient but nonzero values");
  rep.ratio = rep.rhs == 0.0 ? 0.0 : rep.lhs / rep.rhs;
  return rep;
}

std::vector<HarnackRow> weak_harnack_check(const RadialProfile& u, const ProblemParams& params,
                                           double lambda, std::span<const double> radii,
                                           const quad::QuadratureSpec& spec) {
  u.validate();
  const double sigma = params.sigma();
  if (!(lambda > 0.0) || !(lambda < sigma))
    throw LambdaOutOfRange("harnack exponent must lie in (0, sigma) = (0, " +
                           std::to_string(sigma) + ")");
  if ((u.values < 0.0).any())
    throw InvalidInput("harnack check requires a nonnegative profile");
  std::vector<HarnackRow> rows;
  for (double r : radii) {
    if (!(r > 0.0)) throw InvalidInput("harnack radii must be positive");
    const double ball = 2.0 * r;
    if (ball > u.grid.r_max())
      throw GridTooCoarse("ball of radius " + std::to_string(ball) +
                          " exceeds the profile range");
    double integral = 0.0;
    for (int e = 0; e + 1 < u.grid.size(); ++e) {
      const double a = u.grid.nodes[e];
      const double b = std::min<double>(u.grid.nodes[e + 1], ball);
      if (!(b > a)) break;
      integral += quad::integrate(
                      [&](double t) {
                        return t == 0.0 ? 0.0
                                        : std::pow(u(t), lambda) * std::pow(t, params.n - 1.0);
                      },
                      a, b, spec)
                      .value;
    }
    HarnackRow row;
    row.r = r;
    row.mean = std::pow(params.n / std::pow(ball, params.n) * integral, 1.0 / lambda);
    double inf_ball = u(r);
    for (int i = 0; i < u.grid.size() && u.grid.nodes[i] <= r; ++i)
      inf_ball = std::min(inf_ball, u.values[i]);
    row.inf_ball = inf_ball;
    if (!(inf_ball > 0.0))
      throw InvalidInput("harnack check requires a strictly positive profile on the ball");
    row.ratio = row.mean / inf_ball;
    rows.push_back(row);
  }
  return rows;
}

NegativePartReport negative_part_check(const RadialProfile& u) {
  u.validate();
  NegativePartReport rep;
  rep.min_value = u.values.minCoeff();
  rep.nonnegative = rep.min_value >= -1e-12;
  return rep;
}

}  // namespace critlab::galerkin
