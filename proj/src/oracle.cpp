// SPDX-License-Identifier: Apache-2.0

#include "bctas/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace bctas::oracle {

double harmonic(int n) {
  if (n < 1) throw std::domain_error("harmonic: n must be >= 1");
  double h = 0.0;
  for (int i = n; i >= 1; --i) h += 1.0 / i;
  return h;
}

double expected_max_gain(double sigma2, int n) {
  if (sigma2 < 0.0) throw std::domain_error("expected_max_gain: negative variance");
  return sigma2 * harmonic(n);
}

double selection_penalty(int n) { return 1.0 / harmonic(n); }

double selection_penalty_db(int n) { return -10.0 * std::log10(harmonic(n)); }

double min_exp_cdf(double y, double sigma2, int n) {
  if (!(sigma2 > 0.0)) throw std::domain_error("min_exp_cdf: sigma2 must be positive");
  if (n < 1) throw std::domain_error("min_exp_cdf: n must be >= 1");
  if (y < 0.0) throw std::domain_error("min_exp_cdf: y must be >= 0");
  return -std::expm1(-n * y / sigma2);
}

double diversity_outage(double p_siso, int n) {
  if (!(p_siso >= 0.0 && p_siso <= 1.0)) {
    throw std::domain_error("diversity_outage: probability outside [0,1]");
  }
  if (n < 1) throw std::domain_error("diversity_outage: n must be >= 1");
  return std::pow(p_siso, n);
}

double siso_outage(double gamma_th, double gamma_bar) {
  if (!(gamma_bar > 0.0)) throw std::domain_error("siso_outage: mean SNR must be positive");
  if (gamma_th < 0.0) throw std::domain_error("siso_outage: negative threshold");
  return -std::expm1(-gamma_th / gamma_bar);
}

}  // namespace bctas::oracle
