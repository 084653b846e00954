// SPDX-License-Identifier: Apache-2.0
//
// Per-subcarrier transmit antenna selection: the multi-objective greedy
// selector and the max-gain, norm-based and random baselines, plus the
// linear MMSE detector used by the spatial-multiplexing reference.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "bctas/channel.hpp"
#include "bctas/selection_map.hpp"
#include "bctas/tracking.hpp"

namespace bctas::selection {

struct MofsWeights {
  double lambda_tag = 0.5;
  double lambda_victim = 0.5;
  double epsilon = 1e-6;
  double tx_power = 1.0;

  bool operator==(const MofsWeights&) const = default;
};

enum class KalmanMode {
  kLegit,  ///< smooth the legitimate-link power track only
  kAll,    ///< smooth legitimate, tag and victim power tracks
};

std::string_view to_string(KalmanMode mode);
KalmanMode kalman_mode_from_string(std::string_view s);

struct KalmanConfig {
  bool enabled = false;
  tracking::KalmanParams params;
  KalmanMode mode = KalmanMode::kLegit;

  bool operator==(const KalmanConfig&) const = default;
};

/// Mean per-entry power of the tag link over antennas and subcarriers.
double target_gain(const channel::ChannelTensor& tag);

/// P_tx/(g + eps) + lambda_T (p_T - Hbar_T)^2 + lambda_V p_V.
double mofs_cost(double g_legit, double p_tag, double p_victim, const MofsWeights& w,
                 double h_bar_tag);

/// Greedy per-subcarrier argmin of mofs_cost over the estimated channels,
/// ties to the lowest index. `evaluations`, if given, receives the number
/// of cost evaluations performed.
SelectionMap bctas_select(const channel::ChannelSet& set, const MofsWeights& w,
                          const KalmanConfig& kalman, std::size_t* evaluations = nullptr);

/// argmax_j ||h_L[j,k]||^2 per subcarrier.
SelectionMap maxgain_select(const channel::ChannelTensor& legit);

/// One antenna for all subcarriers: the largest wideband norm.
SelectionMap nbas_select(const channel::ChannelTensor& legit);

SelectionMap random_select(std::size_t n_sc, std::size_t n_tx, numerics::RngStream& rng);

/// Precomputed (H^H H + s I)^-1 H^H for one subcarrier. H is row-major
/// n_rx x n_tx; the filter is row-major n_tx x n_rx.
class MmseFilter {
public:
  MmseFilter(std::span<const Complex> h, std::size_t n_rx, std::size_t n_tx, double noise_var);

  CVector apply(std::span<const Complex> y) const;
  /// Post-detection SINR of each stream.
  const std::vector<double>& sinr() const { return sinr_; }

private:
  std::size_t n_rx_;
  std::size_t n_tx_;
  CVector w_;
  std::vector<double> sinr_;
};

CVector mmse_detect(std::span<const Complex> y, std::span<const Complex> h, std::size_t n_rx,
                    std::size_t n_tx, double noise_var);

}  // namespace bctas::selection
