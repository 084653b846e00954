// SPDX-License-Identifier: Apache-2.0

#include "bctas/selection.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace bctas::selection {

std::string_view to_string(KalmanMode mode) {
  return mode == KalmanMode::kAll ? "all" : "legit";
}

KalmanMode kalman_mode_from_string(std::string_view s) {
  if (s == "legit") return KalmanMode::kLegit;
  if (s == "all") return KalmanMode::kAll;
  throw std::invalid_argument("kalman mode must be \"legit\" or \"all\"");
}

double target_gain(const channel::ChannelTensor& tag) {
  if (tag.n_tx() == 0 || tag.n_sc() == 0) throw std::domain_error("target_gain: empty matrix");
  double sum = 0.0;
  for (std::size_t j = 0; j < tag.n_tx(); ++j) {
    for (std::size_t k = 0; k < tag.n_sc(); ++k) sum += tag.power(j, k);
  }
  return sum / static_cast<double>(tag.n_tx() * tag.n_sc());
}

double mofs_cost(double g_legit, double p_tag, double p_victim, const MofsWeights& w,
                 double h_bar_tag) {
  const double dev = p_tag - h_bar_tag;
  return w.tx_power / (g_legit + w.epsilon) + w.lambda_tag * dev * dev +
         w.lambda_victim * p_victim;
}

namespace {

// Power tracks indexed [j * n_sc + k], optionally Kalman-smoothed over k.
std::vector<double> power_tracks(const channel::ChannelTensor& t, bool smooth,
                                 const tracking::KalmanParams& params) {
  const std::size_t n_sc = t.n_sc();
  std::vector<double> p(t.n_tx() * n_sc);
  for (std::size_t j = 0; j < t.n_tx(); ++j) {
    for (std::size_t k = 0; k < n_sc; ++k) p[j * n_sc + k] = t.power(j, k);
    if (smooth) {
      std::span<double> track(p.data() + j * n_sc, n_sc);
      const auto s = tracking::kalman_smooth_track(track, params);
      std::copy(s.begin(), s.end(), track.begin());
    }
  }
  return p;
}

}  // namespace

SelectionMap bctas_select(const channel::ChannelSet& set, const MofsWeights& w,
                          const KalmanConfig& kalman, std::size_t* evaluations) {
  const auto& legit = set.legit_est;
  const auto& tag = set.tag_est;
  const auto& victim = set.victim_est;
  const std::size_t n_tx = legit.n_tx();
  const std::size_t n_sc = legit.n_sc();
  if (tag.n_tx() != n_tx || victim.n_tx() != n_tx || tag.n_sc() != n_sc ||
      victim.n_sc() != n_sc) {
    throw std::domain_error("bctas_select: inconsistent channel dimensions");
  }
  if (!(w.epsilon > 0.0)) throw std::domain_error("bctas_select: epsilon must be positive");

  const bool smooth_all = kalman.enabled && kalman.mode == KalmanMode::kAll;
  const auto g = power_tracks(legit, kalman.enabled, kalman.params);
  const auto pt = power_tracks(tag, smooth_all, kalman.params);
  const auto pv = power_tracks(victim, smooth_all, kalman.params);
  const double h_bar = target_gain(tag);

  SelectionMap map(n_sc, 0);
  std::size_t count = 0;
  for (std::size_t k = 0; k < n_sc; ++k) {
    double best = 0.0;
    for (std::size_t j = 0; j < n_tx; ++j) {
      const std::size_t i = j * n_sc + k;
      const double c = mofs_cost(g[i], pt[i], pv[i], w, h_bar);
      ++count;
      if (j == 0 || c < best) {
        best = c;
        map[k] = static_cast<std::uint32_t>(j);
      }
    }
  }
  if (evaluations) *evaluations = count;
  return map;
}

SelectionMap maxgain_select(const channel::ChannelTensor& legit) {
  SelectionMap map(legit.n_sc(), 0);
  for (std::size_t k = 0; k < legit.n_sc(); ++k) {
    double best = -1.0;
    for (std::size_t j = 0; j < legit.n_tx(); ++j) {
      const double p = legit.power(j, k);
      if (p > best) {
        best = p;
        map[k] = static_cast<std::uint32_t>(j);
      }
    }
  }
  return map;
}

SelectionMap nbas_select(const channel::ChannelTensor& legit) {
  std::uint32_t chosen = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < legit.n_tx(); ++j) {
    double norm = 0.0;
    for (std::size_t k = 0; k < legit.n_sc(); ++k) norm += legit.power(j, k);
    if (norm > best) {
      best = norm;
      chosen = static_cast<std::uint32_t>(j);
    }
  }
  return SelectionMap(legit.n_sc(), chosen);
}

SelectionMap random_select(std::size_t n_sc, std::size_t n_tx, numerics::RngStream& rng) {
  if (n_tx == 0) throw std::domain_error("random_select: no antennas");
  SelectionMap map(n_sc);
  for (auto& j : map) j = static_cast<std::uint32_t>(rng.uniform_index(n_tx));
  return map;
}

MmseFilter::MmseFilter(std::span<const Complex> h, std::size_t n_rx, std::size_t n_tx,
                       double noise_var)
    : n_rx_(n_rx), n_tx_(n_tx), w_(n_tx * n_rx), sinr_(n_tx) {
  if (h.size() != n_rx * n_tx) throw std::domain_error("mmse: channel shape mismatch");
  if (!(noise_var > 0.0)) throw std::domain_error("mmse: noise variance must be positive");
  using Mat = Eigen::MatrixXcd;
  const auto rows = static_cast<Eigen::Index>(n_rx);
  const auto cols = static_cast<Eigen::Index>(n_tx);
  Mat hm(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) hm(r, c) = h[static_cast<std::size_t>(r * cols + c)];
  }
  Mat gram = hm.adjoint() * hm;
  gram.diagonal().array() += noise_var;
  const Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) throw std::logic_error("mmse: regularized Gram not PD");
  const Mat w = llt.solve(hm.adjoint());
  const Mat inv = llt.solve(Mat::Identity(cols, cols));
  for (Eigen::Index i = 0; i < cols; ++i) {
    for (Eigen::Index r = 0; r < rows; ++r) w_[static_cast<std::size_t>(i * rows + r)] = w(i, r);
    sinr_[static_cast<std::size_t>(i)] = 1.0 / (noise_var * inv(i, i).real()) - 1.0;
  }
}

CVector MmseFilter::apply(std::span<const Complex> y) const {
  if (y.size() != n_rx_) throw std::domain_error("mmse: observation length mismatch");
  CVector x(n_tx_, Complex{});
  for (std::size_t i = 0; i < n_tx_; ++i) {
    for (std::size_t r = 0; r < n_rx_; ++r) x[i] += w_[i * n_rx_ + r] * y[r];
  }
  return x;
}

CVector mmse_detect(std::span<const Complex> y, std::span<const Complex> h, std::size_t n_rx,
                    std::size_t n_tx, double noise_var) {
  return MmseFilter(h, n_rx, n_tx, noise_var).apply(y);
}

}  // namespace bctas::selection
