#pragma once

#include <string>

#include <json.hpp>

#include "critlab/barrier.hpp"
#include "critlab/core.hpp"
#include "critlab/criterion.hpp"
#include "critlab/galerkin.hpp"
#include "critlab/potential.hpp"
#include "critlab/radial.hpp"

namespace critlab::io {

// All reports use ordered JSON so emission is byte-stable.
using Json = nlohmann::ordered_json;

Json to_json(const criterion::CriterionReport& rep);
Json to_json(const StructureReport& rep);
Json to_json(const barrier::MomentReport& rep);
Json to_json(const barrier::DualNormReport& rep);
Json to_json(const radial::Certificate& cert);
Json to_json(const radial::CertifyResult& res);
Json to_json(const potential::SplitBounds& sb);
Json to_json(const potential::CenterIdentity& ci);
Json to_json(const galerkin::HardyReport& rep);
Json to_json(const galerkin::NegativePartReport& rep);
Json to_json(const std::vector<galerkin::HarnackRow>& rows);
Json to_json(const std::vector<galerkin::CoercivityProbe>& rows);

// Two-column CSV with header, comma separator, LF line endings, floats
// printed with 17 significant digits (round-trip exact).
void write_profile_csv(const std::string& path, const RadialProfile& profile,
                       const std::string& abscissa = "r", const std::string& ordinate = "u");
RadialProfile read_profile_csv(const std::string& path);

// Columns (x, y) -> CSV with the given header names.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

std::string format_double(double v);  // %.17g

}  // namespace critlab::io
