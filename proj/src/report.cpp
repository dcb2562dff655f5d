#include "critlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "critlab/errors.hpp"

namespace critlab::io {

namespace {

// NaN has no JSON representation; report it as null.
Json num(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const criterion::CriterionReport& rep) {
  Json j;
  j["verdict"] = criterion::to_string(rep.verdict);
  if (rep.verdict == criterion::Verdict::Converges) j["value"] = num(rep.value);
  j["sigma"] = rep.sigma;
  if (!std::isnan(rep.exponent)) j["exponent"] = rep.exponent;
  if (rep.verdict == criterion::Verdict::Inconclusive)
    j["band"] = {num(rep.band_lo), num(rep.band_hi)};
  j["method"] = rep.method;
  return j;
}

Json to_json(const StructureReport& rep) {
  Json j;
  j["pass"] = rep.pass;
  j["monotonicity_margin"] = rep.monotonicity_margin;
  j["coercivity_margin"] = rep.coercivity_margin;
  j["boundedness_margin"] = rep.boundedness_margin;
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  return j;
}

Json to_json(const barrier::MomentReport& rep) {
  Json j;
  j["moment_n_minus_1"] = rep.moment_n_minus_1;
  j["moment_np"] = rep.moment_np;
  j["cov_lhs"] = rep.cov_lhs;
  j["cov_mid"] = rep.cov_mid;
  j["cov_bound"] = num(rep.cov_bound);
  j["dyadic_sum"] = rep.dyadic_sum;
  j["dyadic_tail_negligible"] = rep.dyadic_tail_negligible;
  return j;
}

Json to_json(const barrier::DualNormReport& rep) {
  Json j;
  j["lebesgue_side"] = rep.lebesgue_side;
  j["dyadic_sum"] = rep.dyadic_sum;
  j["moment_np"] = rep.moment_np;
  j["tail_negligible"] = rep.tail_negligible;
  return j;
}

Json to_json(const radial::Certificate& cert) {
  Json j;
  j["verdict"] = cert.pass ? "pass" : "fail";
  j["delta"] = cert.delta;
  j["delta1"] = cert.delta1;
  j["delta2"] = cert.delta2;
  j["barrier_margin"] = cert.barrier_margin;
  j["forcing_margin"] = cert.forcing_margin;
  j["sup_u"] = cert.sup_u;
  j["decay_coeff"] = cert.decay_coeff;
  Json traj = Json::array();
  for (const auto& t : cert.trajectory) {
    Json row;
    row["delta"] = t.delta;
    row["sup_u"] = t.sup_u;
    row["decay_coeff"] = t.decay_coeff;
    row["sup_ok"] = t.sup_ok;
    row["decay_ok"] = t.decay_ok;
    traj.push_back(row);
  }
  j["trajectory"] = traj;
  return j;
}

Json to_json(const radial::CertifyResult& res) {
  Json j;
  j["verdict"] = res.pass ? "pass" : "fail";
  j["barrier_margin"] = res.barrier_margin;
  j["forcing_margin"] = res.forcing_margin;
  return j;
}

Json to_json(const potential::SplitBounds& sb) {
  Json j;
  j["near"] = sb.near;
  j["far"] = sb.far;
  j["near_bound"] = sb.near_bound;
  j["far_bound"] = sb.far_bound;
  return j;
}

Json to_json(const potential::CenterIdentity& ci) {
  Json j;
  j["u0"] = ci.u0;
  j["w0"] = ci.w0;
  j["ratio"] = ci.ratio;
  return j;
}

Json to_json(const galerkin::HardyReport& rep) {
  Json j;
  j["ratio"] = rep.ratio;
  j["sharp"] = rep.sharp_constant;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs;
  return j;
}

Json to_json(const galerkin::NegativePartReport& rep) {
  Json j;
  j["min_value"] = rep.min_value;
  j["nonnegative"] = rep.nonnegative;
  return j;
}

Json to_json(const std::vector<galerkin::HarnackRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["r"] = r.r;
    j["mean"] = r.mean;
    j["inf"] = r.inf_ball;
    j["ratio"] = r.ratio;
    arr.push_back(j);
  }
  return arr;
}

Json to_json(const std::vector<galerkin::CoercivityProbe>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["lambda"] = r.lambda;
    j["seminorm_p"] = r.seminorm_p;
    j["pairing"] = r.pairing;
    j["ratio"] = r.ratio;
    arr.push_back(j);
  }
  return arr;
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw InvalidInput("cannot open '" + path + "' for writing");
  for (size_t c = 0; c < header.size(); ++c)
    std::fprintf(fp, "%s%s", header[c].c_str(), c + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c)
      std::fprintf(fp, "%.17g%s", row[c], c + 1 < row.size() ? "," : "\n");
  }
  std::fclose(fp);
}

void write_profile_csv(const std::string& path, const RadialProfile& profile,
                       const std::string& abscissa, const std::string& ordinate) {
  profile.validate();
  std::vector<std::vector<double>> rows;
  rows.reserve(profile.grid.size());
  for (int i = 0; i < profile.grid.size(); ++i)
    rows.push_back({profile.grid.nodes[i], profile.values[i]});
  write_table_csv(path, {abscissa, ordinate}, rows);
}

RadialProfile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile file '" + path + "'");
  std::vector<double> r, u;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) continue;  // header
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw InvalidInput(path + ":" + std::to_string(lineno) +
                         ": expected two comma-separated columns");
    try {
      r.push_back(std::stod(a));
      u.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": cannot parse number");
    }
  }
  if (r.size() < 2) throw InvalidInput("profile file '" + path + "' has fewer than 2 rows");
  RadialProfile prof;
  prof.grid.nodes = Eigen::Map<Eigen::ArrayXd>(r.data(), r.size());
  prof.values = Eigen::Map<Eigen::ArrayXd>(u.data(), u.size());
  prof.validate();
  return prof;
}

}  // namespace critlab::io
