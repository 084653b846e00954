// SPDX-License-Identifier: Apache-2.0
//
// End-to-end link simulation and the communication and sensing metrics:
// BER, post-selection SNR and outage, tag crest factor, sensor dynamic
// range, harvesting efficiency, victim suppression and energy efficiency.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bctas/channel.hpp"
#include "bctas/config.hpp"
#include "bctas/parallel.hpp"
#include "bctas/selection_map.hpp"

namespace bctas::metrics {

using harness::Scheme;

enum class Metric {
  kBer,
  kOutage,
  kBcfDb,
  kPaprDbAtCcdf,
  kEvmPct,
  kDeltaIDb,
  kSdrDb,
  kEtaH,
  kEe,
  kMaskMarginDb,
  kSidebandDbr,
  kNotchFraction,
};

std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

struct MetricRecord {
  Scheme scheme = Scheme::kBctas;
  Metric metric = Metric::kBer;
  std::optional<double> snr_db;
  double value = 0.0;
  std::size_t n_trials = 0;
  std::uint64_t seed = 0;
  std::optional<double> lambda_t;
  std::optional<double> lambda_v;
  std::optional<double> ibo_db;
  std::optional<std::size_t> n_t;
  std::optional<std::string> model_tag;
  std::optional<double> sigma_e;
  std::optional<double> rho;
  std::optional<std::string> kalman_mode;
  /// Hash of the config that produced the row; not a CSV column.
  std::string config_hash;

  bool operator==(const MetricRecord&) const = default;
};

struct PowerModel {
  double p_chain_mw = 100.0;
  double p_sel_mw = 1.0;
};

/// Stream purposes; every random draw in a trial is keyed by
/// (seed, purpose, trial[, sub-index]).
enum class Purpose : std::uint64_t { kChannel = 1, kCsi, kData, kSelect, kNoise };

numerics::RngStream trial_stream(std::uint64_t seed, Purpose purpose, std::uint64_t trial,
                                 std::uint64_t sub = 0);

/// One Monte Carlo realization of the three links, CSI already corrupted.
channel::ChannelSet draw_channels(const harness::ScenarioConfig& cfg, std::uint64_t trial);

/// Selection map for a TAS scheme from the estimated channels. siso always
/// uses antenna 0. Throws for mmse_mimo.
SelectionMap select_antennas(Scheme scheme, const channel::ChannelSet& set,
                             const harness::ScenarioConfig& cfg, std::uint64_t trial,
                             std::size_t* evaluations = nullptr);

struct BerPoint {
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
};

/// Full chain for one trial and one scheme at every SNR of the grid.
std::vector<BerPoint> ber_trial(const harness::ScenarioConfig& cfg, Scheme scheme,
                                std::span<const double> snr_grid_db, std::uint64_t trial);

/// BER per SNR aggregated over cfg.trials; rows carry only the metric
/// fields (the caller fills aux columns).
std::vector<MetricRecord> simulate_ber(const harness::ScenarioConfig& cfg, Scheme scheme,
                                       std::span<const double> snr_grid_db,
                                       const harness::RunOptions& opts = {});

/// Per-(trial, subcarrier) post-selection SNR P_tx ||h_L[J_k,k]||^2 / noise.
/// For mmse_mimo, the post-MMSE SINR of every stream.
std::vector<double> sinr_samples(const harness::ScenarioConfig& cfg, Scheme scheme,
                                 double snr_db, std::size_t n_trials,
                                 const harness::RunOptions& opts = {});

/// Fraction of samples strictly below the threshold.
double outage_probability(std::span<const double> samples, double gamma_th_db);

/// Noiseless tag incident waveform: oversampled unitary IDFT of
/// h_T[J_k,k] X_k, scaled by sqrt(oversample) so that
/// sum |y|^2 / oversample == sum |h X|^2.
CVector tag_time_signal(const SelectionMap& map, const channel::ChannelTensor& tag,
                        std::span<const Complex> x, std::size_t oversample);

/// max |y|^2 / mean |y|^2 (linear). Domain error for zero energy.
double bcf(std::span<const Complex> y);

/// Per-symbol crest factors of the tag waveform for a batch laid out
/// symbol-major (n_sc entries per symbol).
std::vector<double> bcf_batch(const SelectionMap& map, const channel::ChannelTensor& tag,
                              std::span<const Complex> x_batch, std::size_t oversample);

/// 10 log10(p_saw / (noise + p_b)).
double sdr_db(double p_saw, double noise_var, double p_b);

/// Fraction of entries with P_in >= p_th.
double harvesting_efficiency(std::span<const double> incident_powers, double p_th);

/// Mean over subcarriers of |h_V[J_k,k]|^2.
double victim_power(const SelectionMap& map, const channel::ChannelTensor& victim);

/// 10 log10(victim_power(ref) / victim_power(test)).
double interference_suppression(const SelectionMap& test, const SelectionMap& ref,
                                const channel::ChannelTensor& victim);

/// SE / (n_chains p_chain + p_sel), bits/s/Hz per mW.
double energy_efficiency(double spectral_eff, std::size_t n_chains, const PowerModel& pm);

}  // namespace bctas::metrics
