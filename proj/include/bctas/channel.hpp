// SPDX-License-Identifier: Apache-2.0
//
// Three-link channel generation: legitimate receiver, passive tag and victim
// node. Frequency selectivity comes from an exponential power-delay profile,
// transmit-side spatial correlation from the exponential model.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bctas/numerics.hpp"

namespace bctas::channel {

enum class FadingModel {
  kFlat,  ///< i.i.d. Rayleigh per subcarrier (no frequency correlation)
  kPdp,   ///< tapped delay line with an exponential power-delay profile
};

struct ChannelProfile {
  FadingModel model = FadingModel::kPdp;
  double rms_delay_spread_s = 50e-9;
  double sample_period_s = 50e-9;  // 20 MHz sampling
  double tx_correlation = 0.0;
  double path_exponent = 2.5;
  double d_ref_m = 1.0;
  double d_legit_m = 10.0;
  double d_tag_m = 2.0;
  double d_victim_m = 5.0;

  bool operator==(const ChannelProfile&) const = default;
};

/// Default RMS delay spreads standing in for TGn models A..F. These are an
/// exponential-profile approximation, not the TGn cluster tables.
std::optional<double> tgn_rms_delay_spread(char model);

struct Dims {
  std::size_t n_tx = 4;
  std::size_t n_rx = 1;
  std::size_t n_sc = 256;
};

/// Complex gains indexed (tx antenna, rx antenna, subcarrier).
class ChannelTensor {
public:
  ChannelTensor() = default;
  ChannelTensor(std::size_t n_tx, std::size_t n_rx, std::size_t n_sc, double mean_power);

  std::size_t n_tx() const { return n_tx_; }
  std::size_t n_rx() const { return n_rx_; }
  std::size_t n_sc() const { return n_sc_; }
  /// Configured per-entry average power (path-loss scaled variance).
  double mean_power() const { return mean_power_; }

  Complex& at(std::size_t tx, std::size_t rx, std::size_t sc) {
    return data_[(tx * n_rx_ + rx) * n_sc_ + sc];
  }
  const Complex& at(std::size_t tx, std::size_t rx, std::size_t sc) const {
    return data_[(tx * n_rx_ + rx) * n_sc_ + sc];
  }

  /// ||h_{tx,sc}||^2 summed over receive antennas (MRC gain).
  double power(std::size_t tx, std::size_t sc) const;

  std::span<Complex> raw() { return data_; }
  std::span<const Complex> raw() const { return data_; }

  bool operator==(const ChannelTensor&) const = default;

private:
  std::size_t n_tx_ = 0;
  std::size_t n_rx_ = 0;
  std::size_t n_sc_ = 0;
  double mean_power_ = 0.0;
  std::vector<Complex> data_;
};

/// One realization of all three links plus their CSI-corrupted copies.
/// Tag and victim are single-antenna receivers.
struct ChannelSet {
  ChannelTensor legit;
  ChannelTensor tag;
  ChannelTensor victim;
  ChannelTensor legit_est;
  ChannelTensor tag_est;
  ChannelTensor victim_est;

  bool operator==(const ChannelSet&) const = default;
};

/// (d_ref/d)^exponent.
double path_loss_gain(double d, double exponent, double d_ref);

/// Mean tap powers exp(-l*Ts/rms), truncated once the residual tail holds
/// less than 0.1% of the total, normalized to unit sum.
std::vector<double> pdp_tap_powers(double rms_delay_spread_s, double sample_period_s);

/// One random draw of the tapped delay line.
CVector pdp_taps(double rms_delay_spread_s, double sample_period_s, numerics::RngStream& rng);

/// N_c-point DFT of the taps: H[k] = sum_l h_l exp(-j2pi kl/N_c).
CVector freq_response(std::span<const Complex> taps, std::size_t n_sc);

/// Applies R_tx^{1/2} with R_tx[i][j] = rho^|i-j|. The square root is
/// computed once per (n_tx, rho).
class TxCorrelation {
public:
  TxCorrelation(std::size_t n_tx, double rho);

  void apply(std::span<Complex> h) const;
  std::size_t n_tx() const { return n_tx_; }
  bool identity() const { return identity_; }

private:
  std::size_t n_tx_;
  bool identity_;
  std::vector<double> sqrt_matrix_;  // row-major n_tx x n_tx
};

CVector apply_tx_correlation(std::span<const Complex> h, double rho);

ChannelSet gen_channel_set(const ChannelProfile& profile, const Dims& dims,
                           numerics::RngStream& rng);

/// h_est = sqrt(1 - s^2) h + s e with e ~ CN(0, mean link power).
ChannelSet corrupt_csi(ChannelSet set, double sigma_e, numerics::RngStream& rng);

}  // namespace bctas::channel
