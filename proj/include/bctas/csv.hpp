// SPDX-License-Identifier: Apache-2.0
//
// Result serialization: the metric CSV, side tables and the manifest.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bctas/campaign.hpp"
#include "bctas/metrics.hpp"

namespace bctas::harness {

inline constexpr std::string_view kCsvHeader =
    "scheme,metric,snr_db,value,n_trials,seed,lambda_t,lambda_v,ibo_db,n_t,model_tag,sigma_e,"
    "rho,kalman_mode";

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

std::string to_csv(const std::vector<metrics::MetricRecord>& records);
std::vector<metrics::MetricRecord> parse_csv(std::string_view text);

void emit_csv(const std::vector<metrics::MetricRecord>& records, const std::filesystem::path& path);
std::vector<metrics::MetricRecord> read_csv(const std::filesystem::path& path);

std::string to_csv(const SideTable& table);
std::string manifest_json(const Manifest& m);

/// Writes results.csv, manifest.json and every side table into out_dir.
/// Returns the paths written.
std::vector<std::filesystem::path> write_campaign(const CampaignResult& result,
                                                  const std::filesystem::path& out_dir);

}  // namespace bctas::harness
