#pragma once

#include <string>

#include "wloc/experiments.hpp"
#include "wloc/localization.hpp"
#include "wloc/operators.hpp"

namespace wloc {

/// Config <-> JSON.  Parsing rejects unknown keys; absent keys fall back to
/// the experiment's defaults, so parse -> serialize -> parse is stable.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

/// Full report as a single JSON document with sorted keys and shortest
/// round-trip number formatting (byte-stable for identical inputs).
std::string report_to_json(const ExperimentReport& report);

std::string localization_report_to_json(const LocalizationReport& report,
                                        const LocalizationVerdict& verdict);

/// CSV extracts of the report tables.
std::string berezin_profile_csv(const ExperimentReport& report);
std::string singular_values_csv(const ExperimentReport& report);
std::string bounds_csv(const ExperimentReport& report);
std::string rho_csv(const LocalizationReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Writes report.json plus the CSV extracts into `out_dir`.
void write_report_files(const ExperimentReport& report,
                        const std::string& out_dir);

/// Portable operator bundle: 8-byte magic "WLOCOP01", a little-endian
/// uint64 metadata length, the JSON metadata (provenance, dimensions,
/// frame parameters), then the action matrix as column-major little-endian
/// (re, im) double pairs.
void write_operator_bundle(const std::string& path,
                           const LocalizedOperator& op);

struct OperatorBundle {
  std::string metadata_json;
  Eigen::MatrixXcd action;
};
OperatorBundle read_operator_bundle(const std::string& path);

}  // namespace wloc
