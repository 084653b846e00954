// SPDX-License-Identifier: Apache-2.0

#include "bctas/channel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace bctas::channel {

std::optional<double> tgn_rms_delay_spread(char model) {
  switch (model) {
    case 'A': case 'a': return 0.0;
    case 'B': case 'b': return 15e-9;
    case 'C': case 'c': return 30e-9;
    case 'D': case 'd': return 50e-9;
    case 'E': case 'e': return 100e-9;
    case 'F': case 'f': return 150e-9;
    default: return std::nullopt;
  }
}

ChannelTensor::ChannelTensor(std::size_t n_tx, std::size_t n_rx, std::size_t n_sc,
                             double mean_power)
    : n_tx_(n_tx), n_rx_(n_rx), n_sc_(n_sc), mean_power_(mean_power),
      data_(n_tx * n_rx * n_sc) {}

double ChannelTensor::power(std::size_t tx, std::size_t sc) const {
  double p = 0.0;
  for (std::size_t r = 0; r < n_rx_; ++r) p += std::norm(at(tx, r, sc));
  return p;
}

double path_loss_gain(double d, double exponent, double d_ref) {
  if (!(d > 0.0) || !(d_ref > 0.0)) {
    throw std::domain_error("path_loss_gain: distances must be positive");
  }
  return std::pow(d_ref / d, exponent);
}

std::vector<double> pdp_tap_powers(double rms_delay_spread_s, double sample_period_s) {
  if (!(sample_period_s > 0.0)) {
    throw std::domain_error("pdp_taps: sample period must be positive");
  }
  if (rms_delay_spread_s < 0.0) {
    throw std::domain_error("pdp_taps: negative rms delay spread");
  }
  if (rms_delay_spread_s == 0.0) return {1.0};

  // The tail beyond L taps holds a^L of the infinite-profile power.
  const double a = std::exp(-sample_period_s / rms_delay_spread_s);
  std::size_t taps = 1;
  double tail = a;
  while (tail >= 1e-3) {
    ++taps;
    tail *= a;
  }
  std::vector<double> p(taps);
  double sum = 0.0;
  for (std::size_t l = 0; l < taps; ++l) {
    p[l] = std::pow(a, static_cast<double>(l));
    sum += p[l];
  }
  for (auto& v : p) v /= sum;
  return p;
}

CVector pdp_taps(double rms_delay_spread_s, double sample_period_s, numerics::RngStream& rng) {
  const auto powers = pdp_tap_powers(rms_delay_spread_s, sample_period_s);
  CVector taps(powers.size());
  for (std::size_t l = 0; l < taps.size(); ++l) {
    taps[l] = numerics::gaussian_complex(rng, powers[l]);
  }
  return taps;
}

CVector freq_response(std::span<const Complex> taps, std::size_t n_sc) {
  if (taps.empty()) throw std::domain_error("freq_response: no taps");
  if (taps.size() > n_sc) {
    throw std::domain_error("freq_response: more taps than subcarriers");
  }
  CVector h(n_sc, Complex{});
  std::copy(taps.begin(), taps.end(), h.begin());
  numerics::fft_in_place(h, false);
  return h;
}

TxCorrelation::TxCorrelation(std::size_t n_tx, double rho)
    : n_tx_(n_tx), identity_(rho == 0.0 || n_tx <= 1) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::domain_error("apply_tx_correlation: rho must lie in [0, 1)");
  }
  if (identity_) return;
  Eigen::MatrixXd r(n_tx, n_tx);
  for (std::size_t i = 0; i < n_tx; ++i) {
    for (std::size_t j = 0; j < n_tx; ++j) {
      const auto d = static_cast<double>(i > j ? i - j : j - i);
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(rho, d);
    }
  }
  const Eigen::MatrixXd s = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r).operatorSqrt();
  sqrt_matrix_.resize(n_tx * n_tx);
  for (std::size_t i = 0; i < n_tx; ++i) {
    for (std::size_t j = 0; j < n_tx; ++j) {
      sqrt_matrix_[i * n_tx + j] = s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
}

void TxCorrelation::apply(std::span<Complex> h) const {
  if (h.size() != n_tx_) throw std::invalid_argument("TxCorrelation: size mismatch");
  if (identity_) return;
  CVector out(n_tx_, Complex{});
  for (std::size_t i = 0; i < n_tx_; ++i) {
    for (std::size_t j = 0; j < n_tx_; ++j) out[i] += sqrt_matrix_[i * n_tx_ + j] * h[j];
  }
  std::copy(out.begin(), out.end(), h.begin());
}

CVector apply_tx_correlation(std::span<const Complex> h, double rho) {
  CVector out(h.begin(), h.end());
  TxCorrelation(h.size(), rho).apply(out);
  return out;
}

namespace {

ChannelTensor gen_link(const ChannelProfile& profile, std::size_t n_tx, std::size_t n_rx,
                       std::size_t n_sc, double distance, const TxCorrelation& corr,
                       numerics::RngStream& rng) {
  const double gain = path_loss_gain(distance, profile.path_exponent, profile.d_ref_m);
  ChannelTensor t(n_tx, n_rx, n_sc, gain);
  const double amp = std::sqrt(gain);
  for (std::size_t j = 0; j < n_tx; ++j) {
    for (std::size_t r = 0; r < n_rx; ++r) {
      if (profile.model == FadingModel::kFlat) {
        for (std::size_t k = 0; k < n_sc; ++k) {
          t.at(j, r, k) = amp * numerics::gaussian_complex(rng, 1.0);
        }
      } else {
        const CVector taps = pdp_taps(profile.rms_delay_spread_s, profile.sample_period_s, rng);
        const CVector h = freq_response(taps, n_sc);
        for (std::size_t k = 0; k < n_sc; ++k) t.at(j, r, k) = amp * h[k];
      }
    }
  }
  if (!corr.identity()) {
    CVector column(n_tx);
    for (std::size_t r = 0; r < n_rx; ++r) {
      for (std::size_t k = 0; k < n_sc; ++k) {
        for (std::size_t j = 0; j < n_tx; ++j) column[j] = t.at(j, r, k);
        corr.apply(column);
        for (std::size_t j = 0; j < n_tx; ++j) t.at(j, r, k) = column[j];
      }
    }
  }
  return t;
}

}  // namespace

ChannelSet gen_channel_set(const ChannelProfile& profile, const Dims& dims,
                           numerics::RngStream& rng) {
  if (dims.n_tx == 0 || dims.n_rx == 0 || dims.n_sc == 0) {
    throw std::domain_error("gen_channel_set: dimensions must be >= 1");
  }
  const TxCorrelation corr(dims.n_tx, profile.tx_correlation);
  ChannelSet set;
  set.legit = gen_link(profile, dims.n_tx, dims.n_rx, dims.n_sc, profile.d_legit_m, corr, rng);
  set.tag = gen_link(profile, dims.n_tx, 1, dims.n_sc, profile.d_tag_m, corr, rng);
  set.victim = gen_link(profile, dims.n_tx, 1, dims.n_sc, profile.d_victim_m, corr, rng);
  set.legit_est = set.legit;
  set.tag_est = set.tag;
  set.victim_est = set.victim;
  return set;
}

namespace {

void corrupt(const ChannelTensor& truth, ChannelTensor& est, double sigma_e,
             numerics::RngStream& rng) {
  const double keep = std::sqrt(1.0 - sigma_e * sigma_e);
  const auto src = truth.raw();
  auto dst = est.raw();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = keep * src[i] + sigma_e * numerics::gaussian_complex(rng, truth.mean_power());
  }
}

}  // namespace

ChannelSet corrupt_csi(ChannelSet set, double sigma_e, numerics::RngStream& rng) {
  if (!(sigma_e >= 0.0 && sigma_e < 1.0)) {
    throw std::domain_error("corrupt_csi: sigma_e must lie in [0, 1)");
  }
  if (sigma_e == 0.0) {
    set.legit_est = set.legit;
    set.tag_est = set.tag;
    set.victim_est = set.victim;
    return set;
  }
  corrupt(set.legit, set.legit_est, sigma_e, rng);
  corrupt(set.tag, set.tag_est, sigma_e, rng);
  corrupt(set.victim, set.victim_est, sigma_e, rng);
  return set;
}

}  // namespace bctas::channel
