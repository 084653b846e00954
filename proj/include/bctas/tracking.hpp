// SPDX-License-Identifier: Apache-2.0
//
// Scalar Kalman filter run across the subcarrier index of one antenna's
// power-gain track.

#pragma once

#include <span>
#include <vector>

namespace bctas::tracking {

struct KalmanParams {
  double q = 1e-4;  ///< process noise variance
  double r = 1e-2;  ///< measurement noise variance

  bool operator==(const KalmanParams&) const = default;
};

struct KalmanState {
  double estimate = 0.0;
  double covariance = 0.0;
  double gain = 0.0;  ///< gain used by the last update
};

/// Predict (x- = x, P- = P + Q) then correct with measurement z.
KalmanState kalman_step(const KalmanState& state, double z, const KalmanParams& params);

/// Causal filter over the track, seeded with x0 = z[0] and P0 = R.
std::vector<double> kalman_smooth_track(std::span<const double> z, const KalmanParams& params);

/// Limit of the per-step gain for a random-walk state.
double steady_state_gain(const KalmanParams& params);

}  // namespace bctas::tracking
