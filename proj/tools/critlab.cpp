// critlab: command-line front end over the library workflows.
//
// Subcommands: classify, construct, certify, wolff, galerkin, hardy, harnack.
// Reports are ordered JSON (or flattened key,value CSV with --format csv);
// profiles are two-column CSV.  Runs are deterministic for a fixed
// invocation, so byte-identical reports across repeats are guaranteed.
//
// Exit codes:
//   0  success (classify: criterion converges; construct/certify: pass)
//   2  invalid input (flags, config file, descriptors, parameter regime)
//  10  refusal: criterion diverges, or a required integral diverges
//  11  refusal: criterion inconclusive
//  12  delta search exhausted
//  13  certificate check failed
//   1  internal numeric failure

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "critlab/barrier.hpp"
#include "critlab/core.hpp"
#include "critlab/criterion.hpp"
#include "critlab/errors.hpp"
#include "critlab/galerkin.hpp"
#include "critlab/potential.hpp"
#include "critlab/radial.hpp"
#include "critlab/report.hpp"

using namespace critlab;
using io::Json;

namespace {

// Every tunable the subcommands share; CLI flags write here directly and the
// config file fills in whatever the command line left untouched.
struct Options {
  std::string config_path;

  int n = 3;
  double p = 2.0;
  double c1 = 1.0;
  double c2 = 1.0;

  std::string f_desc;               // nonlinearity descriptor
  double eps = 1.0;
  std::string forcing_desc = "indicator";

  int near_nodes = 64;              // composite grid: cells on [0, 1]
  double grid_ratio = 1.05;         // geometric growth factor beyond r = 1
  double r_max = 1e3;

  double rel_tol = 1e-10;
  double abs_tol = 1e-14;

  double delta0 = 1.0;
  double shrink = 0.5;
  int max_iters = 60;

  std::string format = "json";
  std::string out_path;             // empty: stdout

  // per-command extras
  double d = 0.0;                   // wolff: observation offset |x|
  double delta = 1.0;               // certify: barrier width
  double lambda = 1.0;              // harnack: mean exponent
  std::string radii = "1,2,4,8,16";
  double R = 50.0;                  // galerkin: truncation radius
  int cells = 2000;
  int levels = 4;
  std::string op_desc = "model";
  std::string solution_out;
  std::string profile_name;         // hardy: named test profile
  std::string outdir = ".";
  bool moments = false;
};

ProblemParams problem(const Options& o) { return ProblemParams(o.n, o.p, o.c1, o.c2); }

quad::QuadratureSpec quad_spec(const Options& o) {
  quad::QuadratureSpec spec;
  spec.rel_tol = o.rel_tol;
  spec.abs_tol = o.abs_tol;
  return spec;
}

RadialGrid make_grid(const Options& o) {
  return RadialGrid::composite(o.near_nodes, 1.0, o.grid_ratio, o.r_max);
}

Nonlinearity nonlinearity(const Options& o) {
  if (o.f_desc.empty())
    throw InvalidInput("nonlinearity descriptor required (--f or config key 'f')");
  return Nonlinearity::parse(o.f_desc, o.eps);
}

// --- config file ----------------------------------------------------------
//
// Flat key = value lines with dotted sections (problem.n = 3), '#' comments,
// unknown keys rejected with file:line context.  A key is applied only when
// its command-line flag was not given: flags override the file.

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& v, const std::string& where) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw InvalidInput(where + ": cannot parse '" + v + "' as a number");
  return x;
}

int parse_int(const std::string& v, const std::string& where) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size())
    throw InvalidInput(where + ": cannot parse '" + v + "' as an integer");
  return static_cast<int>(x);
}

struct ConfigEntry {
  const char* key;
  const char* flag;  // overriding command-line option
  std::function<void(Options&, const std::string&, const std::string&)> set;
};

const std::vector<ConfigEntry>& config_schema() {
  auto real_field = [](double Options::* f) {
    return [f](Options& o, const std::string& v, const std::string& w) { o.*f = parse_real(v, w); };
  };
  auto int_field = [](int Options::* f) {
    return [f](Options& o, const std::string& v, const std::string& w) { o.*f = parse_int(v, w); };
  };
  auto string_field = [](std::string Options::* f) {
    return [f](Options& o, const std::string& v, const std::string&) { o.*f = v; };
  };
  static const std::vector<ConfigEntry> schema = {
      {"problem.n", "--n", int_field(&Options::n)},
      {"problem.p", "--p", real_field(&Options::p)},
      {"problem.c1", "--c1", real_field(&Options::c1)},
      {"problem.c2", "--c2", real_field(&Options::c2)},
      {"f", "--f", string_field(&Options::f_desc)},
      {"eps", "--eps", real_field(&Options::eps)},
      {"forcing", "--f-forcing", string_field(&Options::forcing_desc)},
      {"grid.near_nodes", "--near-nodes", int_field(&Options::near_nodes)},
      {"grid.ratio", "--grid-ratio", real_field(&Options::grid_ratio)},
      {"grid.r_max", "--r-max", real_field(&Options::r_max)},
      {"quad.rel_tol", "--rel-tol", real_field(&Options::rel_tol)},
      {"quad.abs_tol", "--abs-tol", real_field(&Options::abs_tol)},
      {"search.delta0", "--delta0", real_field(&Options::delta0)},
      {"search.shrink", "--shrink", real_field(&Options::shrink)},
      {"search.max_iters", "--max-iters", int_field(&Options::max_iters)},
      {"output.format", "--format",
       [](Options& o, const std::string& v, const std::string& w) {
         if (v != "json" && v != "csv")
           throw InvalidInput(w + ": output.format must be 'json' or 'csv', got '" + v + "'");
         o.format = v;
       }},
      {"output.path", "--output", string_field(&Options::out_path)},
  };
  return schema;
}

void load_config(const std::string& path, const CLI::App* cmd, Options& o) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path + ":" + std::to_string(lineno);
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw InvalidInput(where + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const ConfigEntry* entry = nullptr;
    for (const auto& e : config_schema())
      if (key == e.key) entry = &e;
    if (!entry) throw InvalidInput(where + ": unknown key '" + key + "'");
    const auto* opt = cmd->get_option_no_throw(entry->flag);
    if (opt && opt->count() > 0) continue;  // the flag wins over the file
    entry->set(o, value, where);
  }
}

// --- report emission ------------------------------------------------------

void flatten_csv(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten_csv(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j) flatten_csv(v, prefix + "[" + std::to_string(i++) + "]", out);
  } else {
    out += prefix + "," + j.dump() + "\n";
  }
}

void emit(const Options& o, const Json& j) {
  std::string text;
  if (o.format == "csv") {
    text = "key,value\n";
    flatten_csv(j, "", text);
  } else {
    text = j.dump(2) + "\n";
  }
  if (o.out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + o.out_path + "' for writing");
    out << text;
  }
}

Json num_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

// --- subcommands ----------------------------------------------------------

int cmd_classify(const Options& o) {
  const auto rep = criterion::classify(nonlinearity(o), problem(o), quad_spec(o));
  emit(o, io::to_json(rep));
  switch (rep.verdict) {
    case criterion::Verdict::Converges: return 0;
    case criterion::Verdict::Diverges: return 10;
    default: return 11;
  }
}

int cmd_construct(const Options& o) {
  const auto params = problem(o);
  const auto f = nonlinearity(o);
  const auto grid = make_grid(o);
  const auto spec = quad_spec(o);
  radial::SearchSettings settings;
  settings.delta0 = o.delta0;
  settings.shrink = o.shrink;
  settings.max_iters = o.max_iters;
  const auto cert = radial::delta_search(f, params, settings, grid, spec);

  // Re-run the accepted trial to materialize the profile artifacts.
  const auto freg = criterion::regularize(f, params);
  const barrier::BarrierParams bp(params, freg.eps, cert.delta);
  const auto F = barrier::forcing_from(freg, bp);
  const auto u = radial::solve(F, params, grid, spec);

  std::filesystem::create_directories(o.outdir);
  const std::string u_path = o.outdir + "/u.csv";
  const std::string f_path = o.outdir + "/forcing.csv";
  const std::string cert_path = o.outdir + "/certificate.json";
  io::write_profile_csv(u_path, u, "r", "u");
  io::write_profile_csv(f_path, barrier::forcing_profile(freg, bp, grid), "r", "F");

  Json j = io::to_json(cert);
  j["eps"] = freg.eps;
  j["kappa"] = params.kappa();
  if (o.moments) j["moments"] = io::to_json(barrier::moment_report(freg, bp, spec));
  j["artifacts"] = Json{{"u", u_path}, {"forcing", f_path}, {"certificate", cert_path}};
  {
    std::ofstream out(cert_path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + cert_path + "' for writing");
    out << j.dump(2) + "\n";
  }
  emit(o, j);
  return cert.pass ? 0 : 13;
}

int cmd_certify(const Options& o) {
  const auto params = problem(o);
  const auto freg = criterion::regularize(nonlinearity(o), params);
  const barrier::BarrierParams bp(params, freg.eps, o.delta);
  const auto F = barrier::forcing_from(freg, bp);
  const auto u = radial::solve(F, params, make_grid(o), quad_spec(o));
  const auto res = radial::certify_supersolution(u, freg, bp);
  Json j = io::to_json(res);
  j["delta"] = o.delta;
  j["eps"] = freg.eps;
  emit(o, j);
  return res.pass ? 0 : 13;
}

int cmd_wolff(const Options& o) {
  const auto spec = quad_spec(o);
  const potential::RadialMeasure m(Forcing::parse(o.forcing_desc), problem(o), spec);
  Json j;
  j["W"] = potential::wolff_potential(m, o.d, spec);
  j["d"] = o.d;
  j["mass"] = m.mass;
  if (o.d > 0.0) j["split"] = io::to_json(potential::split_bounds(m, o.d, spec));
  emit(o, j);
  return 0;
}

int cmd_galerkin(const Options& o) {
  const auto params = problem(o);
  const auto F = Forcing::parse(o.forcing_desc);
  const auto op = OperatorDescriptor::parse(o.op_desc);
  const auto spec = quad_spec(o);
  if (o.levels < 1) throw InvalidInput("galerkin: --levels must be >= 1");
  const int coarsen = 1 << (o.levels - 1);
  if (o.cells < 2 * coarsen || o.cells % coarsen != 0)
    throw InvalidInput("galerkin: --cells must be a multiple of 2^(levels-1) and >= twice it");

  // Model operator: compare each level against the exact radial solver (its
  // value also supplies the boundary condition).  Other operators run
  // standalone with u(R) = 0 and report the committed truncation error.
  const bool model = std::holds_alternative<ModelOperator>(op.kind);
  const double boundary = model ? radial::solve_value(F, params, o.R, spec) : 0.0;

  Json levels = Json::array();
  double final_error = std::numeric_limits<double>::quiet_NaN();
  galerkin::GalerkinSolution last;
  for (int k = 0; k < o.levels; ++k) {
    const int c = o.cells >> (o.levels - 1 - k);
    galerkin::RadialFemSpace space;
    space.mesh = RadialGrid::uniform(o.R, c);
    space.boundary_value = boundary;
    const auto sys = galerkin::assemble(space, op, F, params);
    const auto sol = galerkin::solve_system(sys);
    Json row;
    row["cells"] = c;
    row["h"] = o.R / c;
    row["iterations"] = sol.iterations;
    row["residual_norm"] = sol.residual_norm;
    row["energy"] = num_or_null(sol.energy);
    if (model) {
      const auto exact = radial::solve(F, params, space.mesh, spec);
      double err = 0.0;
      for (int i = 0; i < space.mesh.size(); ++i)
        err = std::max(err, std::fabs(sol.profile.values[i] - exact.values[i]));
      row["error"] = err;
      final_error = err;
    } else {
      row["truncation_estimate"] = sys.truncation_estimate;
    }
    levels.push_back(row);
    last = sol;
  }

  Json j;
  j["operator"] = op.label();
  j["R"] = o.R;
  j["boundary_value"] = boundary;
  j["levels"] = levels;
  j["final_error"] = num_or_null(final_error);
  j["nonnegative"] = galerkin::negative_part_check(last.profile).nonnegative;
  if (!o.solution_out.empty()) io::write_profile_csv(o.solution_out, last.profile, "r", "u");
  emit(o, j);
  return 0;
}

// Named closed-form decaying profiles for the Hardy check.
galerkin::AnalyticProfile named_profile(const std::string& name) {
  galerkin::AnalyticProfile prof;
  prof.label = name;
  std::string head = name, arg;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    head = name.substr(0, colon);
    arg = name.substr(colon + 1);
  }
  if (head == "exp") {
    const double c = arg.empty() ? 1.0 : parse_real(arg, "profile '" + name + "'");
    if (!(c > 0.0)) throw InvalidInput("profile '" + name + "': rate must be positive");
    prof.u = [c](double r) { return std::exp(-c * r); };
    prof.du = [c](double r) { return -c * std::exp(-c * r); };
    return prof;
  }
  if (head == "power" || head == "invsq") {
    const double a = head == "invsq"  ? 2.0
                     : arg.empty()    ? 2.0
                                      : parse_real(arg, "profile '" + name + "'");
    if (!(a > 0.0)) throw InvalidInput("profile '" + name + "': exponent must be positive");
    prof.u = [a](double r) { return std::pow(1.0 + r, -a); };
    prof.du = [a](double r) { return -a * std::pow(1.0 + r, -a - 1.0); };
    return prof;
  }
  if (head == "gauss") {
    prof.u = [](double r) { return std::exp(-r * r); };
    prof.du = [](double r) { return -2.0 * r * std::exp(-r * r); };
    return prof;
  }
  if (head == "bump") {
    prof.u = [](double r) { return r < 1.0 ? (1.0 - r * r) * (1.0 - r * r) : 0.0; };
    prof.du = [](double r) { return r < 1.0 ? -4.0 * r * (1.0 - r * r) : 0.0; };
    prof.support = 1.0;
    return prof;
  }
  if (head == "tent") {
    prof.u = [](double r) { return r < 1.0 ? 1.0 - r : 0.0; };
    prof.du = [](double r) { return r < 1.0 ? -1.0 : 0.0; };
    prof.support = 1.0;
    return prof;
  }
  throw InvalidInput("unknown profile '" + name +
                     "' (expected exp[:c] | power:a | invsq | gauss | bump | tent)");
}

int cmd_hardy(const Options& o) {
  const auto rep = galerkin::hardy_check(named_profile(o.profile_name), problem(o), quad_spec(o));
  Json j;
  j["profile"] = o.profile_name;
  j.update(io::to_json(rep));
  emit(o, j);
  return 0;
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ','))
    out.push_back(parse_real(trim(item), "radii list '" + text + "'"));
  if (out.empty()) throw InvalidInput("radii list is empty");
  return out;
}

int cmd_harnack(const Options& o) {
  const auto params = problem(o);
  const auto F = Forcing::parse(o.forcing_desc);
  const auto u = radial::solve(F, params, make_grid(o), quad_spec(o));
  const auto rows = galerkin::weak_harnack_check(u, params, o.lambda, parse_radii(o.radii),
                                                 quad_spec(o));
  double lo = rows.front().ratio, hi = rows.front().ratio;
  for (const auto& row : rows) {
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  Json j;
  j["forcing"] = F.label;
  j["lambda"] = o.lambda;
  j["sigma"] = params.sigma();
  j["rows"] = io::to_json(rows);
  j["spread"] = hi / lo;
  emit(o, j);
  return 0;
}

// --- wiring ---------------------------------------------------------------

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "flat key=value config file; flags override it");
  cmd->add_option("--n", o.n, "space dimension n");
  cmd->add_option("--p", o.p, "growth exponent p (1 < p < n)");
  cmd->add_option("--c1", o.c1, "lower ellipticity constant");
  cmd->add_option("--c2", o.c2, "upper ellipticity constant");
  cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
  cmd->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
  cmd->add_option("--format", o.format, "report format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", o.out_path, "report file (default: stdout)");
}

void add_nonlinearity(CLI::App* cmd, Options& o) {
  cmd->add_option("--f", o.f_desc, "nonlinearity: power:q | powerlog:q,a | table:<csv>");
  cmd->add_option("--eps", o.eps, "smallness threshold eps");
}

void add_forcing(CLI::App* cmd, Options& o) {
  cmd->add_option("--f-forcing,--f", o.forcing_desc,
                  "forcing: indicator[:R] | powtail:beta | table:<csv> | zero");
}

void add_grid(CLI::App* cmd, Options& o) {
  cmd->add_option("--near-nodes", o.near_nodes, "composite grid cells on [0, 1]");
  cmd->add_option("--grid-ratio", o.grid_ratio, "composite grid growth ratio");
  cmd->add_option("--r-max", o.r_max, "grid outer radius");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blow-up dichotomy laboratory for quasilinear elliptic inequalities"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success/converges, 2 invalid input, 10 divergent criterion or\n"
      "integral (refusal), 11 inconclusive classification, 12 search exhausted,\n"
      "13 certificate failed, 1 internal numeric error.");
  Options o;

  auto* classify = app.add_subcommand("classify", "classify the smallness criterion of f");
  add_common(classify, o);
  add_nonlinearity(classify, o);

  auto* construct = app.add_subcommand(
      "construct", "search delta, build the certified supersolution, write artifacts");
  add_common(construct, o);
  add_nonlinearity(construct, o);
  add_grid(construct, o);
  construct->add_option("--delta0", o.delta0, "initial barrier width");
  construct->add_option("--shrink", o.shrink, "delta shrink factor in (0, 1)");
  construct->add_option("--max-iters", o.max_iters, "max shrink steps");
  construct->add_option("--outdir", o.outdir, "directory for u.csv, forcing.csv, certificate.json");
  construct->add_flag("--moments", o.moments, "include the barrier moment report");

  auto* certify = app.add_subcommand("certify", "certify one barrier width without searching");
  add_common(certify, o);
  add_nonlinearity(certify, o);
  add_grid(certify, o);
  certify->add_option("--delta", o.delta, "barrier width delta");

  auto* wolff = app.add_subcommand("wolff", "Wolff potential of a radial forcing measure");
  add_common(wolff, o);
  add_forcing(wolff, o);
  wolff->add_option("--d", o.d, "observation offset |x|");

  auto* galerkin_cmd = app.add_subcommand("galerkin", "finite-element convergence study");
  add_common(galerkin_cmd, o);
  add_forcing(galerkin_cmd, o);
  galerkin_cmd->add_option("--op", o.op_desc, "operator: model | scaled:<name>");
  galerkin_cmd->add_option("--R", o.R, "truncation radius");
  galerkin_cmd->add_option("--cells", o.cells, "finest mesh cell count");
  galerkin_cmd->add_option("--levels", o.levels, "number of mesh halvings");
  galerkin_cmd->add_option("--solution-out", o.solution_out, "CSV path for the finest solution");

  auto* hardy = app.add_subcommand("hardy", "Hardy-quotient check of a named profile");
  add_common(hardy, o);
  hardy->add_option("--profile", o.profile_name, "exp[:c] | power:a | invsq | gauss | bump | tent")
      ->required();

  auto* harnack = app.add_subcommand("harnack", "weak-Harnack ratio table of the exact solution");
  add_common(harnack, o);
  add_forcing(harnack, o);
  add_grid(harnack, o);
  harnack->add_option("--lambda", o.lambda, "mean exponent in (0, sigma)");
  harnack->add_option("--radii", o.radii, "comma-separated ball radii");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const struct {
    CLI::App* cmd;
    int (*run)(const Options&);
  } dispatch[] = {
      {classify, cmd_classify}, {construct, cmd_construct}, {certify, cmd_certify},
      {wolff, cmd_wolff},       {galerkin_cmd, cmd_galerkin}, {hardy, cmd_hardy},
      {harnack, cmd_harnack},
  };
  try {
    for (const auto& entry : dispatch) {
      if (!entry.cmd->parsed()) continue;
      if (!o.config_path.empty()) load_config(o.config_path, entry.cmd, o);
      return entry.run(o);
    }
    throw InvalidInput("no subcommand given");
  } catch (const CriterionDiverges& e) {
    std::fprintf(stderr, "critlab: %s\n", e.what());
    return 10;
  } catch (const CriterionInconclusive& e) {
    std::fprintf(stderr, "critlab: %s\n", e.what());
    return 11;
  } catch (const SearchExhausted& e) {
    std::fprintf(stderr, "critlab: %s\n", e.what());
    return 12;
  } catch (const DivergentMass& e) {
    std::fprintf(stderr, "critlab: %s\n", e.what());
    return 10;
  } catch (const DivergentMoment& e) {
    std::fprintf(stderr, "critlab: %s\n", e.what());
    return 10;
  } catch (const DivergentNorm& e) {
    std::fprintf(stderr, "critlab: %s\n", e.what());
    return 10;
  } catch (const InvalidInput& e) {
    std::fprintf(stderr, "critlab: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "critlab: internal error: %s\n", e.what());
    return 1;
  }
}
