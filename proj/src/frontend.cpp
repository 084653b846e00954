// SPDX-License-Identifier: Apache-2.0

#include "bctas/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bctas::frontend {

namespace {

void check_params(const RappParams& p) {
  if (!(p.gain > 0.0) || !(p.a_sat > 0.0) || !(p.p > 0.0)) {
    throw std::domain_error("rapp: gain, a_sat and p must be positive");
  }
}

}  // namespace

double rapp_amam(double a_in, const RappParams& params) {
  check_params(params);
  if (a_in < 0.0) throw std::domain_error("rapp_amam: negative input amplitude");
  const double v = params.gain * a_in;
  const double two_p = 2.0 * params.p;
  if (v <= params.a_sat) return v / std::pow(1.0 + std::pow(v / params.a_sat, two_p), 1.0 / two_p);
  // Same expression divided through by v / A_sat; stays below A_sat in floating point.
  return params.a_sat / std::pow(1.0 + std::pow(params.a_sat / v, two_p), 1.0 / two_p);
}

CVector apply_pa(std::span<const Complex> signal, double ibo_db, const RappParams& params) {
  check_params(params);
  const double p_in = numerics::mean_power(signal);
  if (!(p_in > 0.0)) throw std::domain_error("apply_pa: signal has zero mean power");
  const double sat_in = params.a_sat / params.gain;
  const double target = sat_in * sat_in / numerics::db_to_linear(ibo_db);
  const double drive = std::sqrt(target / p_in);
  const double back = 1.0 / (drive * params.gain);
  CVector out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double a = std::abs(signal[i]);
    if (a == 0.0) {
      out[i] = Complex{};
      continue;
    }
    out[i] = signal[i] * (rapp_amam(a * drive, params) * back / a);
  }
  return out;
}

void EvmAccumulator::add(std::span<const Complex> ref, std::span<const Complex> rx) {
  if (ref.size() != rx.size()) throw std::domain_error("evm_percent: length mismatch");
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ref_energy_ += std::norm(ref[i]);
    rx_energy_ += std::norm(rx[i]);
    cross_ += rx[i] * std::conj(ref[i]);
  }
}

void EvmAccumulator::merge(const EvmAccumulator& other) {
  ref_energy_ += other.ref_energy_;
  rx_energy_ += other.rx_energy_;
  cross_ += other.cross_;
}

double EvmAccumulator::percent() const {
  if (!(ref_energy_ > 0.0)) throw std::domain_error("evm_percent: reference has zero power");
  // With alpha = C / E_ref: sum |rx - alpha ref|^2 = E_rx - |C|^2 / E_ref
  // and sum |alpha ref|^2 = |C|^2 / E_ref.
  const double fit = std::norm(cross_) / ref_energy_;
  if (!(fit > 0.0)) throw std::domain_error("evm_percent: received signal uncorrelated");
  const double err = std::max(rx_energy_ - fit, 0.0);
  return 100.0 * std::sqrt(err / fit);
}

double evm_percent(std::span<const Complex> ref, std::span<const Complex> rx) {
  EvmAccumulator acc;
  acc.add(ref, rx);
  return acc.percent();
}

Psd psd_welch_linear(std::span<const Complex> signal, std::size_t segment_len,
                     std::size_t overlap, double sample_rate_hz) {
  if (segment_len == 0 || segment_len > signal.size()) {
    throw std::domain_error("psd_welch: segment longer than signal");
  }
  if (overlap >= segment_len) throw std::domain_error("psd_welch: overlap must be < segment");
  if (!(sample_rate_hz > 0.0)) throw std::domain_error("psd_welch: sample rate must be positive");

  std::vector<double> window(segment_len);
  double wpow = 0.0;
  for (std::size_t i = 0; i < segment_len; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(segment_len)));
    wpow += window[i] * window[i];
  }
  const std::size_t step = segment_len - overlap;
  std::vector<double> acc(segment_len, 0.0);
  std::size_t segments = 0;
  CVector buf(segment_len);
  for (std::size_t start = 0; start + segment_len <= signal.size(); start += step) {
    for (std::size_t i = 0; i < segment_len; ++i) buf[i] = signal[start + i] * window[i];
    numerics::fft_in_place(buf, false);
    for (std::size_t i = 0; i < segment_len; ++i) acc[i] += std::norm(buf[i]);
    ++segments;
  }
  Psd out;
  out.freq_hz.resize(segment_len);
  out.value.resize(segment_len);
  const double norm = 1.0 / (static_cast<double>(segments) * wpow * sample_rate_hz);
  const std::size_t half = segment_len / 2;
  for (std::size_t i = 0; i < segment_len; ++i) {
    const std::size_t bin = (i + segment_len - half) % segment_len;
    out.freq_hz[i] = (static_cast<double>(i) - static_cast<double>(half)) * sample_rate_hz /
                     static_cast<double>(segment_len);
    out.value[i] = acc[bin] * norm;
  }
  return out;
}

Psd normalize_psd_db(const Psd& linear) {
  const double peak = *std::max_element(linear.value.begin(), linear.value.end());
  if (!(peak > 0.0)) throw std::domain_error("psd_welch: zero-power signal");
  Psd out;
  out.freq_hz = linear.freq_hz;
  out.value.resize(linear.value.size());
  for (std::size_t i = 0; i < linear.value.size(); ++i) {
    out.value[i] = std::max(10.0 * std::log10(linear.value[i] / peak), -300.0);
  }
  return out;
}

Psd psd_welch(std::span<const Complex> signal, std::size_t segment_len, std::size_t overlap,
              double sample_rate_hz) {
  return normalize_psd_db(psd_welch_linear(signal, segment_len, overlap, sample_rate_hz));
}

MaskTable::MaskTable()
    : MaskTable({{0.0, 0.0}, {9.0, 0.0}, {11.0, -20.0}, {20.0, -28.0}, {30.0, -45.0}}) {}

MaskTable::MaskTable(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::domain_error("mask: no breakpoints");
  if (points_.front().first != 0.0 || points_.front().second != 0.0) {
    throw std::domain_error("mask: first breakpoint must be (0 MHz, 0 dBr)");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].first > points_[i - 1].first)) {
      throw std::domain_error("mask: offsets must be strictly increasing");
    }
  }
}

double MaskTable::limit_dbr(double offset_mhz) const {
  const double f = std::abs(offset_mhz);
  if (f >= points_.back().first) return points_.back().second;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (f <= points_[i].first) {
      const auto& [f0, l0] = points_[i - 1];
      const auto& [f1, l1] = points_[i];
      return l0 + (l1 - l0) * (f - f0) / (f1 - f0);
    }
  }
  return points_.back().second;
}

double MaskTable::plateau_mhz() const {
  double edge = 0.0;
  for (const auto& [f, l] : points_) {
    if (l < 0.0) break;
    edge = f;
  }
  return edge;
}

MaskReport mask_compliance(const Psd& psd, const MaskTable& mask) {
  if (psd.freq_hz.empty() || psd.freq_hz.size() != psd.value.size()) {
    throw std::domain_error("mask_compliance: malformed psd");
  }
  const double span_mhz = mask.last_offset_mhz();
  const double lo = psd.freq_hz.front() / 1e6;
  const double hi = psd.freq_hz.back() / 1e6;
  if (lo > -span_mhz || hi < span_mhz) {
    throw std::domain_error("mask_compliance: psd does not cover the mask breakpoints");
  }
  MaskReport r;
  r.worst_margin_db = std::numeric_limits<double>::infinity();
  r.worst_oob_margin_db = std::numeric_limits<double>::infinity();
  const double plateau = mask.plateau_mhz();
  for (std::size_t i = 0; i < psd.freq_hz.size(); ++i) {
    const double f_mhz = psd.freq_hz[i] / 1e6;
    const double margin = mask.limit_dbr(f_mhz) - psd.value[i];
    if (margin < r.worst_margin_db) {
      r.worst_margin_db = margin;
      r.worst_freq_hz = psd.freq_hz[i];
    }
    if (std::abs(f_mhz) > plateau && margin < r.worst_oob_margin_db) {
      r.worst_oob_margin_db = margin;
      r.worst_oob_freq_hz = psd.freq_hz[i];
    }
  }
  r.compliant = r.worst_margin_db >= 0.0;
  return r;
}

double sideband_dbr(const Psd& psd, double from_hz) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < psd.freq_hz.size(); ++i) {
    if (std::abs(psd.freq_hz[i]) >= from_hz) worst = std::max(worst, psd.value[i]);
  }
  return worst;
}

}  // namespace bctas::frontend
