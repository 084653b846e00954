// SPDX-License-Identifier: Apache-2.0
//
// Scenario description loaded from JSON with strict key checking.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bctas/channel.hpp"
#include "bctas/frontend.hpp"
#include "bctas/selection.hpp"

namespace bctas::harness {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { kBctas, kMaxGain, kNbas, kRandom, kSiso, kMmseMimo };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);
/// TAS schemes drive one antenna per subcarrier; only mmse_mimo does not.
bool is_tas(Scheme s);

struct DimsConfig {
  std::size_t n_t = 4;
  std::size_t n_r = 4;
  std::size_t n_c = 256;
  std::size_t n_cp = 32;
  std::size_t oversample = 4;

  bool operator==(const DimsConfig&) const = default;
};

struct ChannelConfig {
  /// "flat", "tgn_a" .. "tgn_f", or "pdp" (uses rms_delay_ns).
  std::string model = "tgn_d";
  double rms_delay_ns = 50.0;
  double sample_period_ns = 50.0;
  double rho = 0.0;
  double path_exponent = 2.5;
  double d_ref_m = 1.0;
  double d_l_m = 10.0;
  double d_t_m = 2.0;
  double d_v_m = 5.0;

  bool operator==(const ChannelConfig&) const = default;
};

struct CsiConfig {
  double sigma_e = 0.0;
  selection::KalmanConfig kalman;

  bool operator==(const CsiConfig&) const = default;
};

struct PaConfig {
  bool enabled = false;
  frontend::RappParams rapp;
  double ibo_db = 10.0;
  frontend::MaskTable mask;
  /// Raised-cosine symbol transition; 100 ns is the 802.11 T_TR value.
  double transition_ns = 100.0;
  /// Bandwidth occupied by the N_c subcarriers (HT20: 56 x 312.5 kHz).
  double occupied_bw_mhz = 17.5;

  bool operator==(const PaConfig&) const = default;
};

struct PowerModelConfig {
  double p_chain_mw = 100.0;
  double p_sel_mw = 1.0;

  bool operator==(const PowerModelConfig&) const = default;
};

struct TagConfig {
  double p_th = 0.1;
  double rho_refl = 0.01;
  double noise_var = 1e-3;

  bool operator==(const TagConfig&) const = default;
};

/// Sweep axes; an empty list selects the experiment's built-in default.
struct SweepConfig {
  std::vector<std::size_t> n_t;
  std::vector<double> lambda_t;
  std::vector<double> lambda_v;
  std::vector<double> rho;
  std::vector<double> ibo_db;

  bool operator==(const SweepConfig&) const = default;
};

struct ScenarioConfig {
  DimsConfig dims;
  unsigned modulation = 16;
  ChannelConfig channel;
  CsiConfig csi;
  selection::MofsWeights weights;
  PaConfig pa;
  std::vector<double> snr_grid_db{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
  double gamma_th_db = 7.0;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes{Scheme::kBctas, Scheme::kMaxGain};
  PowerModelConfig power_model;
  TagConfig tag;
  std::size_t symbols_per_trial = 1;
  double ccdf_level = 0.01;
  double notch_depth_db = 10.0;
  SweepConfig sweep;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates; missing keys take the defaults above. Errors
/// name the offending key and the violated constraint.
ScenarioConfig load_config_text(std::string_view text);
ScenarioConfig load_config_file(const std::filesystem::path& path);

/// Checks every constraint; throws ConfigError.
void validate(const ScenarioConfig& cfg);

/// Canonical JSON of the fully resolved config (sorted keys).
std::string to_json_text(const ScenarioConfig& cfg, int indent = 2);

/// SHA-256 hex digest of the canonical compact JSON.
std::string config_hash(const ScenarioConfig& cfg);

/// Channel profile described by the config; throws on an unknown model.
channel::ChannelProfile channel_profile(const ScenarioConfig& cfg);

}  // namespace bctas::harness
