// SPDX-License-Identifier: Apache-2.0

#include "bctas/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bctas::waveform {

unsigned bits_per_symbol(unsigned m) {
  switch (m) {
    case 16: return 4;
    case 64: return 6;
    default: throw std::domain_error("qam: modulation order must be 16 or 64");
  }
}

namespace {

unsigned levels_per_axis(unsigned m) { return m == 16 ? 4 : 8; }

double axis_scale(unsigned m) { return m == 16 ? 1.0 / std::sqrt(10.0) : 1.0 / std::sqrt(42.0); }

CVector build_constellation(unsigned m) {
  const unsigned b = bits_per_symbol(m) / 2;
  const unsigned levels = levels_per_axis(m);
  const double scale = axis_scale(m);
  std::vector<double> amp_of_gray(levels);
  for (unsigned lvl = 0; lvl < levels; ++lvl) {
    amp_of_gray[lvl ^ (lvl >> 1)] = (2.0 * lvl - (levels - 1.0)) * scale;
  }
  CVector table(m);
  for (unsigned label = 0; label < m; ++label) {
    table[label] = {amp_of_gray[label >> b], amp_of_gray[label & ((1u << b) - 1)]};
  }
  return table;
}

}  // namespace

const CVector& constellation(unsigned m) {
  static const CVector qam16 = build_constellation(16);
  static const CVector qam64 = build_constellation(64);
  bits_per_symbol(m);
  return m == 16 ? qam16 : qam64;
}

CVector qam_map(std::span<const std::uint8_t> bits, unsigned m) {
  const unsigned nb = bits_per_symbol(m);
  if (bits.size() % nb != 0) {
    throw std::domain_error("qam_map: bit count not divisible by log2(M)");
  }
  const CVector& table = constellation(m);
  CVector out(bits.size() / nb);
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned label = 0;
    for (unsigned i = 0; i < nb; ++i) label = (label << 1) | (bits[s * nb + i] & 1u);
    out[s] = table[label];
  }
  return out;
}

namespace {

unsigned decide_axis(double x, unsigned levels, double scale) {
  const double u = (x / scale + (levels - 1.0)) / 2.0;
  const double r = std::clamp(std::round(u), 0.0, levels - 1.0);
  const auto lvl = static_cast<unsigned>(r);
  return lvl ^ (lvl >> 1);
}

}  // namespace

Bits qam_demap(std::span<const Complex> rx, unsigned m) {
  const unsigned nb = bits_per_symbol(m);
  const unsigned b = nb / 2;
  const unsigned levels = levels_per_axis(m);
  const double scale = axis_scale(m);
  Bits out(rx.size() * nb);
  for (std::size_t s = 0; s < rx.size(); ++s) {
    const unsigned label = (decide_axis(rx[s].real(), levels, scale) << b) |
                           decide_axis(rx[s].imag(), levels, scale);
    for (unsigned i = 0; i < nb; ++i) {
      out[s * nb + i] = static_cast<std::uint8_t>((label >> (nb - 1 - i)) & 1u);
    }
  }
  return out;
}

std::size_t subcarrier_bin(std::size_t k, std::size_t n_sc, std::size_t oversample) {
  const std::size_t half = (n_sc + 1) / 2;
  return k < half ? k : k + (oversample - 1) * n_sc;
}

CVector ofdm_symbol(std::span<const Complex> spectrum, std::size_t oversample) {
  const std::size_t n = spectrum.size();
  if (n == 0 || oversample == 0) throw std::domain_error("ofdm_symbol: empty grid");
  CVector padded(n * oversample, Complex{});
  for (std::size_t k = 0; k < n; ++k) padded[subcarrier_bin(k, n, oversample)] = spectrum[k];
  return numerics::idft_unitary(padded);
}

CVector ofdm_symbol_demod(std::span<const Complex> body, std::size_t n_sc, std::size_t oversample) {
  if (body.size() != n_sc * oversample) {
    throw std::domain_error("ofdm_symbol_demod: body length mismatch");
  }
  const CVector spec = numerics::dft_unitary(body);
  CVector out(n_sc);
  for (std::size_t k = 0; k < n_sc; ++k) out[k] = spec[subcarrier_bin(k, n_sc, oversample)];
  return out;
}

namespace {

void check_params(const OfdmParams& p) {
  if (p.n_sc == 0 || p.oversample == 0) throw std::domain_error("ofdm: empty grid");
  if (p.n_cp >= p.n_sc) throw std::domain_error("ofdm: cyclic prefix must be shorter than N_c");
  if (p.transition > p.cp_len()) {
    throw std::domain_error("ofdm: transition window longer than the cyclic prefix");
  }
}

std::vector<double> ramp_up(std::size_t len) {
  std::vector<double> w(len);
  for (std::size_t i = 0; i < len; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                 static_cast<double>(len)));
  }
  return w;
}

// Writes one symbol (prefix + body [+ windowed suffix]) at `offset`.
void place_symbol(const CVector& body, const OfdmParams& p, const std::vector<double>& ramp,
                  CVector& out, std::size_t offset) {
  const std::size_t n = body.size();
  const std::size_t cp = p.cp_len();
  const std::size_t tw = p.transition;
  const std::size_t ext_len = cp + n + tw;
  for (std::size_t i = 0; i < ext_len; ++i) {
    Complex v = body[(i + n - cp) % n];
    if (i < tw) v *= ramp[i];
    if (i >= cp + n) v *= ramp[tw - 1 - (i - cp - n)];
    out[offset + i] += v;
  }
}

}  // namespace

PerAntennaWaveform ofdm_modulate(const OfdmGrid& grid, const SelectionMap& map, std::size_t n_tx) {
  const OfdmParams& p = grid.params;
  check_params(p);
  if (n_tx == 0) throw std::domain_error("ofdm_modulate: no transmit antennas");
  if (map.size() != p.n_sc) throw std::domain_error("ofdm_modulate: map length must equal N_c");
  for (auto j : map) {
    if (j >= n_tx) throw std::domain_error("ofdm_modulate: antenna index out of range");
  }
  if (grid.symbols.size() != grid.n_syms * p.n_sc) {
    throw std::domain_error("ofdm_modulate: grid size mismatch");
  }
  const std::size_t len = p.symbol_len();
  const auto ramp = ramp_up(p.transition);

  PerAntennaWaveform w;
  w.sample_rate_hz = p.sample_rate_hz();
  w.symbol_len = len;
  w.antennas.assign(n_tx, CVector(grid.n_syms * len + p.transition, Complex{}));
  CVector spec(p.n_sc);
  for (std::size_t j = 0; j < n_tx; ++j) {
    bool active = false;
    for (auto a : map) active |= (a == j);
    if (!active) continue;
    for (std::size_t s = 0; s < grid.n_syms; ++s) {
      const auto x = grid.symbol(s);
      for (std::size_t k = 0; k < p.n_sc; ++k) spec[k] = map[k] == j ? x[k] : Complex{};
      place_symbol(ofdm_symbol(spec, p.oversample), p, ramp, w.antennas[j], s * len);
    }
  }
  return w;
}

PerAntennaWaveform ofdm_modulate_streams(std::span<const OfdmGrid> grids) {
  if (grids.empty()) throw std::domain_error("ofdm_modulate_streams: no streams");
  const OfdmParams& p = grids[0].params;
  check_params(p);
  const SelectionMap single(p.n_sc, 0);
  PerAntennaWaveform w;
  w.sample_rate_hz = p.sample_rate_hz();
  w.symbol_len = p.symbol_len();
  for (const auto& g : grids) {
    w.antennas.push_back(std::move(ofdm_modulate(g, single, 1).antennas[0]));
  }
  return w;
}

CVector ofdm_demodulate(std::span<const Complex> samples, const OfdmParams& p, std::size_t n_syms) {
  check_params(p);
  const std::size_t len = p.symbol_len();
  if (samples.size() < n_syms * len) throw std::domain_error("ofdm_demodulate: stream too short");
  CVector out;
  out.reserve(n_syms * p.n_sc);
  for (std::size_t s = 0; s < n_syms; ++s) {
    const auto body = samples.subspan(s * len + p.cp_len(), p.fft_len());
    const CVector x = ofdm_symbol_demod(body, p.n_sc, p.oversample);
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

double papr_db(std::span<const Complex> signal) {
  if (signal.empty()) throw std::domain_error("papr_db: empty signal");
  double peak = 0.0;
  for (const auto& v : signal) peak = std::max(peak, std::norm(v));
  const double mean = numerics::mean_power(signal);
  if (!(mean > 0.0)) throw std::domain_error("papr_db: zero-power signal");
  return numerics::linear_to_db(peak / mean);
}

std::vector<double> ccdf(std::span<const double> samples, std::span<const double> thresholds) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  std::vector<double> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    out.push_back(n > 0 ? static_cast<double>(above) / n : 0.0);
  }
  return out;
}

double value_at_ccdf(std::vector<double> samples, double level) {
  if (samples.empty()) throw std::domain_error("value_at_ccdf: no samples");
  if (!(level >= 0.0 && level <= 1.0)) throw std::domain_error("value_at_ccdf: level outside [0,1]");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  const auto allowed = static_cast<std::size_t>(std::floor(level * static_cast<double>(n)));
  const std::size_t idx = allowed >= n ? 0 : n - 1 - allowed;
  return samples[idx];
}

}  // namespace bctas::waveform
