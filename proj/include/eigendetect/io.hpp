#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigendetect/mc_harness.hpp"

namespace eigendetect::io {

/// Eigenvalue list from a single-column CSV file, or from a JSON array when
/// the file extension is .json. Values may appear in any order.
std::vector<double> read_value_list(const std::filesystem::path& path);

/// One value per line, full precision.
void write_value_list(const std::filesystem::path& path,
                      std::span<const double> values);

/// Snapshot CSV: one row per sensor. Real data has m columns; complex data
/// has 2m columns of interleaved (re, im) pairs and must be announced by
/// `complex_data`, since the on-disk shape alone is ambiguous.
SnapshotMatrix read_snapshot_csv(const std::filesystem::path& path,
                                 bool complex_data);

void write_snapshot_csv(const std::filesystem::path& path,
                        const SnapshotMatrix& x);

nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

/// Report CSV, one row per (cell, method):
///   n,m,method,p_khat_0..p_khat_<k_max>,p_overflow,p_error,
///   k_eff,z_sep,trials,seed
/// Probabilities are derived from integer counts, so the bytes are
/// identical for any worker count.
std::string report_csv_string(const ExperimentReport& report);
void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report);

/// JSON sidecar: schema_version, config echo, and the raw integer counts.
nlohmann::json report_sidecar_json(const ExperimentReport& report);

/// DetectionResult as JSON; infinite scores map to null.
nlohmann::json detection_result_to_json(const DetectionResult& result);

/// Shortest decimal form that round-trips a double.
std::string format_full(double value);

}  // namespace eigendetect::io
