// SPDX-License-Identifier: Apache-2.0
//
// Gray-mapped square QAM, OFDM with cyclic prefix and optional symbol
// windowing, and peak statistics (PAPR, CCDF).

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bctas/numerics.hpp"
#include "bctas/selection_map.hpp"

namespace bctas::waveform {

using Bits = std::vector<std::uint8_t>;

/// log2(M) for the supported orders {16, 64}; domain error otherwise.
unsigned bits_per_symbol(unsigned m);

/// Constellation indexed by bit label. The label holds the in-phase Gray
/// bits first (MSB first), then the quadrature Gray bits. Per axis, level m
/// has amplitude 2m - (L-1) and Gray code m ^ (m >> 1). Scale is 1/sqrt(10)
/// for 16-QAM and 1/sqrt(42) for 64-QAM.
const CVector& constellation(unsigned m);

CVector qam_map(std::span<const std::uint8_t> bits, unsigned m);

/// Hard minimum-distance decision, returned as bits.
Bits qam_demap(std::span<const Complex> rx, unsigned m);

struct OfdmParams {
  std::size_t n_sc = 256;
  std::size_t n_cp = 32;
  std::size_t oversample = 1;
  /// Raised-cosine ramp length in output samples; 0 disables windowing.
  std::size_t transition = 0;
  /// Occupied bandwidth spanned by the n_sc subcarriers.
  double bandwidth_hz = 20e6;

  std::size_t fft_len() const { return n_sc * oversample; }
  std::size_t cp_len() const { return n_cp * oversample; }
  std::size_t symbol_len() const { return fft_len() + cp_len(); }
  double sample_rate_hz() const { return bandwidth_hz * static_cast<double>(oversample); }
};

/// Frequency-domain symbols, laid out symbol-major: symbols[s * n_sc + k].
struct OfdmGrid {
  OfdmParams params;
  unsigned modulation = 16;
  std::size_t n_syms = 0;
  CVector symbols;

  std::span<const Complex> symbol(std::size_t s) const {
    return std::span<const Complex>(symbols).subspan(s * params.n_sc, params.n_sc);
  }
};

struct PerAntennaWaveform {
  std::vector<CVector> antennas;
  double sample_rate_hz = 0.0;
  std::size_t symbol_len = 0;
};

/// Places n_sc subcarriers on an fft_len grid with the zero padding in the
/// middle of the spectrum: k < ceil(n_sc/2) stays at bin k, the upper half
/// wraps to negative frequencies.
std::size_t subcarrier_bin(std::size_t k, std::size_t n_sc, std::size_t oversample);

/// One oversampled OFDM body (no cyclic prefix), unitary IDFT of length
/// n_sc * oversample.
CVector ofdm_symbol(std::span<const Complex> spectrum, std::size_t oversample);

/// Inverse of ofdm_symbol: unitary DFT and bin extraction.
CVector ofdm_symbol_demod(std::span<const Complex> body, std::size_t n_sc, std::size_t oversample);

/// Antenna j carries X_k on subcarriers with J[k] == j and zeros elsewhere.
/// Symbols are laid back to back with period symbol_len(); with windowing
/// the stream carries an extra `transition` tail samples.
PerAntennaWaveform ofdm_modulate(const OfdmGrid& grid, const SelectionMap& map, std::size_t n_tx);

/// All N_t antennas carry independent full streams (spatial multiplexing).
PerAntennaWaveform ofdm_modulate_streams(std::span<const OfdmGrid> grids);

/// Returns n_syms * n_sc frequency-domain samples from one time stream.
CVector ofdm_demodulate(std::span<const Complex> samples, const OfdmParams& params,
                        std::size_t n_syms);

/// 10 log10(max |s|^2 / mean |s|^2). Domain error on zero-power input.
double papr_db(std::span<const Complex> signal);

/// Fraction of samples strictly exceeding each threshold.
std::vector<double> ccdf(std::span<const double> samples, std::span<const double> thresholds);

/// Smallest sample value v with ccdf(v) <= level.
double value_at_ccdf(std::vector<double> samples, double level);

}  // namespace bctas::waveform
