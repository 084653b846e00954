// SPDX-License-Identifier: Apache-2.0
//
// Transmit front end: Rapp AM/AM amplifier with input back-off, EVM,
// Welch PSD and spectral-mask checks.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bctas/numerics.hpp"

namespace bctas::frontend {

struct RappParams {
  double gain = 1.0;
  double a_sat = 1.0;
  double p = 2.0;

  bool operator==(const RappParams&) const = default;
};

/// G a / (1 + (G a / A_sat)^(2p))^(1/(2p)).
double rapp_amam(double a_in, const RappParams& params);

/// Scales the signal so its mean power sits ibo_db below (A_sat/G)^2,
/// applies AM/AM with the phase untouched, then removes the small-signal
/// gain and the drive scaling so the linear region maps x to x.
CVector apply_pa(std::span<const Complex> signal, double ibo_db, const RappParams& params);

/// 100 sqrt(sum |rx - a ref|^2 / sum |a ref|^2) with a the least-squares
/// complex gain fit of rx onto ref.
double evm_percent(std::span<const Complex> ref, std::span<const Complex> rx);

/// Running sums behind evm_percent so that batches can be pooled in order.
class EvmAccumulator {
public:
  void add(std::span<const Complex> ref, std::span<const Complex> rx);
  void merge(const EvmAccumulator& other);
  double percent() const;

private:
  double ref_energy_ = 0.0;
  double rx_energy_ = 0.0;
  Complex cross_{};
};

struct Psd {
  std::vector<double> freq_hz;  ///< ascending, DC in the middle
  std::vector<double> value;    ///< dBr (peak = 0) or linear, see producer
};

/// Hann-windowed Welch average, linear power per bin (not normalized).
Psd psd_welch_linear(std::span<const Complex> signal, std::size_t segment_len,
                     std::size_t overlap, double sample_rate_hz);

/// Welch PSD in dB relative to its peak.
Psd psd_welch(std::span<const Complex> signal, std::size_t segment_len, std::size_t overlap,
              double sample_rate_hz);

/// Converts a linear PSD to dBr. Empty bins floor at -300 dBr.
Psd normalize_psd_db(const Psd& linear);

/// Piecewise-linear limit in |offset|, held constant past the last point.
class MaskTable {
public:
  using Point = std::pair<double, double>;  ///< (offset MHz, limit dBr)

  MaskTable();
  explicit MaskTable(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  double limit_dbr(double offset_mhz) const;
  /// Largest offset whose limit is still 0 dBr (edge of the in-band plateau).
  double plateau_mhz() const;
  double last_offset_mhz() const { return points_.back().first; }

  bool operator==(const MaskTable&) const = default;

private:
  std::vector<Point> points_;
};

struct MaskReport {
  bool compliant = false;
  double worst_margin_db = 0.0;
  double worst_freq_hz = 0.0;
  /// Same, restricted to bins beyond the 0 dBr plateau.
  double worst_oob_margin_db = 0.0;
  double worst_oob_freq_hz = 0.0;
};

/// Margin = limit - psd per bin; compliant iff the minimum is >= 0.
MaskReport mask_compliance(const Psd& psd_dbr, const MaskTable& mask);

/// Highest PSD value at |f| >= from_hz.
double sideband_dbr(const Psd& psd_dbr, double from_hz);

}  // namespace bctas::frontend
