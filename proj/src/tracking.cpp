// SPDX-License-Identifier: Apache-2.0

#include "bctas/tracking.hpp"

#include <cmath>
#include <stdexcept>

namespace bctas::tracking {

namespace {

void check(const KalmanParams& p) {
  if (!(p.q >= 0.0)) throw std::domain_error("kalman: Q must be >= 0");
  if (!(p.r > 0.0)) throw std::domain_error("kalman: R must be > 0");
}

}  // namespace

KalmanState kalman_step(const KalmanState& state, double z, const KalmanParams& params) {
  check(params);
  const double x_prior = state.estimate;
  const double p_prior = state.covariance + params.q;
  const double k = p_prior / (p_prior + params.r);
  KalmanState next;
  next.estimate = x_prior + k * (z - x_prior);
  next.covariance = (1.0 - k) * p_prior;
  next.gain = k;
  return next;
}

std::vector<double> kalman_smooth_track(std::span<const double> z, const KalmanParams& params) {
  check(params);
  if (z.empty()) throw std::domain_error("kalman_smooth_track: empty track");
  std::vector<double> out(z.size());
  KalmanState s{z[0], params.r, 0.0};
  for (std::size_t k = 0; k < z.size(); ++k) {
    s = kalman_step(s, z[k], params);
    out[k] = s.estimate;
  }
  return out;
}

double steady_state_gain(const KalmanParams& params) {
  check(params);
  // Prior covariance M solves M^2 - Q M - Q R = 0.
  const double q = params.q;
  const double m = 0.5 * (q + std::sqrt(q * q + 4.0 * q * params.r));
  return m / (m + params.r);
}

}  // namespace bctas::tracking
