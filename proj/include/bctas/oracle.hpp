// SPDX-License-Identifier: Apache-2.0
//
// Closed-form order statistics of exponential power gains.

#pragma once

#include <map>
#include <string>

namespace bctas::oracle {

struct TheoryResult {
  std::string name;
  std::map<std::string, double> inputs;
  double value = 0.0;
};

/// sum_{i=1..n} 1/i.
double harmonic(int n);

/// Mean of the largest of n i.i.d. exponential gains with mean sigma2.
double expected_max_gain(double sigma2, int n);

/// Ratio of the legitimate gain kept when the antenna is chosen
/// independently of it, over max-gain selection: 1/H_n.
double selection_penalty(int n);
double selection_penalty_db(int n);

/// CDF of the smallest of n i.i.d. exponentials with mean sigma2.
double min_exp_cdf(double y, double sigma2, int n);

double diversity_outage(double p_siso, int n);

/// 1 - exp(-gamma_th / gamma_bar), linear inputs.
double siso_outage(double gamma_th, double gamma_bar);

}  // namespace bctas::oracle
