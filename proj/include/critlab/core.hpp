#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace critlab {

using Vec = Eigen::VectorXd;

// --- problem parameters ---------------------------------------------------

// Dimension n, growth exponent p and the ellipticity constants c1 <= c2 of
// the operator class.  The supercritical regime n > p is required by every
// quantity that involves the decay exponents.
struct ProblemParams {
  int n = 3;
  double p = 2.0;
  double c1 = 1.0;
  double c2 = 1.0;

  ProblemParams() = default;
  ProblemParams(int n, double p, double c1 = 1.0, double c2 = 1.0);

  bool supercritical() const { return n > p; }
  // kappa = (n - p)/(p - 1): decay rate of the fundamental barrier.
  double kappa() const;
  // sigma = n (p - 1)/(n - p): the critical integrability exponent.
  double sigma() const;
  // Holder conjugate p' = p/(p-1).
  double p_conj() const { return p / (p - 1.0); }
};

// --- operator descriptors -------------------------------------------------

// A(x, s, xi) = |xi|^{p-2} xi  (the model p-Laplacian flux).
struct ModelOperator {};

// A(x, s, xi) = a(|x|) |xi|^{p-2} xi with a radial coefficient in [c1, c2].
struct ScaledOperator {
  std::function<double(double)> coeff;
  std::string label;
};

// Arbitrary flux map for structure testing; evaluated componentwise by the
// user-supplied closure.
struct CustomOperator {
  std::function<Vec(const Vec&, double, const Vec&)> eval;
  std::string label;
};

struct OperatorDescriptor {
  std::variant<ModelOperator, ScaledOperator, CustomOperator> kind;

  static OperatorDescriptor model();
  static OperatorDescriptor scaled(std::function<double(double)> coeff, std::string label);
  static OperatorDescriptor custom(std::function<Vec(const Vec&, double, const Vec&)> eval,
                                   std::string label);
  // Grammar: "model" | "scaled:<name>" with <name> in {half, ramp, osc}.
  static OperatorDescriptor parse(const std::string& text);
  std::string label() const;
  bool is_variational() const { return !std::holds_alternative<CustomOperator>(kind); }
};

Vec eval_operator(const OperatorDescriptor& op, const ProblemParams& params,
                  const Vec& x, double s, const Vec& xi);

// Scalar radial reduction A(r, s, g) * sign convention: returns the flux
// magnitude-with-sign for gradient g e_r at radius r.
double eval_operator_radial(const OperatorDescriptor& op, const ProblemParams& params,
                            double r, double s, double g);

// --- structure verification ----------------------------------------------

struct SamplingPlan {
  int count = 10000;
  std::uint64_t seed = 1;
  double scale = 1.0;  // std-dev of the Gaussian point/vector samples
};

// Margins are worst-case over the sample set; all must be >= -tol to pass.
struct StructureReport {
  double monotonicity_margin = 0.0;  // min <A(x,s,xi)-A(x,s,eta), xi-eta>
  double coercivity_margin = 0.0;    // min <A,xi> - c1 |xi|^p
  double boundedness_margin = 0.0;   // min c2 |xi|^{p-1} - |A|
  int samples = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

StructureReport check_structure(const OperatorDescriptor& op, const ProblemParams& params,
                                const SamplingPlan& plan = {}, double tol = 1e-12);

// --- nonlinearity descriptors ---------------------------------------------

// f(t) = t^q, q > 0.
struct PowerLaw {
  double q;
};

// f(t) = t^q |ln t|^{-alpha}; only defined on (0, 1/e] so that |ln t| >= 1.
struct PowerLog {
  double q;
  double alpha;
};

// Piecewise-linear interpolant of (t_i, f_i); t strictly increasing from 0,
// f non-decreasing and nonnegative.
struct TabulatedRule {
  std::vector<double> t;
  std::vector<double> f;
};

struct CustomRule {
  std::function<double(double)> fn;
  std::string label;
};

class Nonlinearity;

// max{ base(t), t^growth } -- the growth floor used by the construction.
struct GrowthFloored {
  std::shared_ptr<const Nonlinearity> base;
  double growth;
};

// Non-decreasing nonlinearity on [0, eps] with f(0) = 0 (continuous
// extension).  eps is carried with the descriptor: every consumer needs the
// pair, and the small-t behavior is only meaningful relative to it.
class Nonlinearity {
public:
  std::variant<PowerLaw, PowerLog, TabulatedRule, CustomRule, GrowthFloored> kind;
  double eps = 1.0;

  static Nonlinearity power(double q, double eps);
  static Nonlinearity power_log(double q, double alpha, double eps);
  static Nonlinearity tabulated(std::vector<double> t, std::vector<double> f);
  static Nonlinearity custom(std::function<double(double)> fn, double eps, std::string label);
  // Grammar: "power:q" | "powerlog:q,alpha" | "table:<csv path>".
  static Nonlinearity parse(const std::string& text, double eps);
  std::string label() const;
};

// Evaluates f at t; DomainError outside [0, eps].
double eval_nonlinearity(const Nonlinearity& f, double t);

// --- radial grids and profiles --------------------------------------------

// Strictly increasing node set starting at r = 0.
struct RadialGrid {
  Eigen::ArrayXd nodes;

  int size() const { return static_cast<int>(nodes.size()); }
  int cells() const { return size() - 1; }
  double r_max() const { return nodes[nodes.size() - 1]; }
  // Index i with nodes[i] <= r < nodes[i+1] (clamped to the last cell).
  int cell_of(double r) const;
  void validate() const;

  static RadialGrid uniform(double r_max, int cells);
  // near_cells uniform cells on [0, near_end], then geometrically growing
  // cells (given ratio) until r_max is passed.  The default reproduces the
  // reference grid: 64 cells to r = 1, ratio 1.05, r_max = 1e3.
  static RadialGrid composite(int near_cells = 64, double near_end = 1.0,
                              double ratio = 1.05, double r_max = 1e3);
  // Copy of this grid with extra nodes merged in.
  RadialGrid with_nodes(std::span<const double> extra) const;
};

// Piecewise-linear radial function sampled on a grid.  Evaluation clamps to
// the end values outside [0, r_max].
struct RadialProfile {
  RadialGrid grid;
  Eigen::ArrayXd values;

  double operator()(double r) const;
  void validate() const;
};

// --- radial forcing terms -------------------------------------------------

// Nonnegative radial forcing F(r); identically 0 beyond support_radius (which
// may be +inf).  jumps lists known discontinuity radii so quadratures and
// residual checks can split there.
struct Forcing {
  std::function<double(double)> eval;
  double support_radius = std::numeric_limits<double>::infinity();
  std::vector<double> jumps;
  std::string label;

  double operator()(double r) const;

  static Forcing zero();
  static Forcing indicator(double radius = 1.0);          // 1 on [0, radius]
  static Forcing power_tail(double beta);                 // (1 + r)^-beta
  static Forcing from_profile(RadialProfile profile);     // 0 beyond r_max
  // Grammar: "indicator[:R]" | "powtail:beta" | "table:<csv path>" | "zero".
  static Forcing parse(const std::string& text);
};

}  // namespace critlab
