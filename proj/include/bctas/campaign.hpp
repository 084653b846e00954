// SPDX-License-Identifier: Apache-2.0
//
// Experiment campaigns. Each experiment maps a validated scenario to metric
// rows plus optional side tables (curves that do not fit the row schema).

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bctas/config.hpp"
#include "bctas/metrics.hpp"
#include "bctas/parallel.hpp"

namespace bctas::harness {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Experiment { kBer, kOutage, kBcf, kPapr, kEvm, kMask, kPareto, kCorrelation, kNotch, kOracle };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view s);
std::vector<Experiment> all_experiments();

struct SideTable {
  std::string file;  ///< file name inside the output directory
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Manifest {
  std::string config_hash;
  std::string version;
  std::string timestamp;  ///< RFC 3339, UTC
  std::string experiment;
};

struct CampaignResult {
  std::vector<metrics::MetricRecord> records;
  std::vector<SideTable> tables;
  Manifest manifest;
};

CampaignResult run_campaign(const ScenarioConfig& cfg, Experiment experiment,
                            const RunOptions& opts = {});

/// Current UTC time as RFC 3339.
std::string rfc3339_now();

}  // namespace bctas::harness
