// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bctas/metrics.hpp"
#include "bctas/waveform.hpp"
#include "catch_amalgamated.hpp"

using namespace bctas;
using namespace bctas::metrics;
using bctas::channel::ChannelTensor;
using bctas::harness::ScenarioConfig;
using bctas::numerics::RngStream;
using Catch::Approx;

namespace {

ScenarioConfig flat_cfg(std::size_t n_t, std::size_t trials) {
  ScenarioConfig c;
  c.dims.n_t = n_t;
  c.dims.n_r = 1;
  c.dims.n_c = 256;
  c.channel.model = "flat";
  c.trials = trials;
  c.seed = 21;
  return c;
}

// E over Rayleigh gamma with mean g of Q(sqrt(2 b gamma)).
double rayleigh_q(double b, double g) { return 0.5 * (1.0 - std::sqrt(b * g / (1.0 + b * g))); }

// Gray 16-QAM over flat Rayleigh: per-axis Gray 4-PAM terms averaged in closed form.
double rayleigh_16qam_ber(double snr) {
  return (3.0 * rayleigh_q(0.1, snr) + 2.0 * rayleigh_q(0.9, snr) - rayleigh_q(2.5, snr)) / 4.0;
}

double ks_distance(std::vector<double> x, const auto& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

CVector random_qam(RngStream& rng, std::size_t n) {
  waveform::Bits b(n * 4);
  for (auto& v : b) v = rng.bit();
  return waveform::qam_map(b, 16);
}

}  // namespace

TEST_CASE("metric names round trip") {
  for (int i = 0; i <= static_cast<int>(Metric::kNotchFraction); ++i) {
    const auto m = static_cast<Metric>(i);
    CHECK(metric_from_string(to_string(m)) == m);
  }
  CHECK_THROWS(metric_from_string("nope"));
}

TEST_CASE("ber is zero at very high snr") {
  auto c = flat_cfg(4, 100);
  c.schemes = {harness::Scheme::kBctas};
  const std::vector<double> grid{60.0};
  for (auto s : {harness::Scheme::kBctas, harness::Scheme::kSiso}) {
    const auto r = simulate_ber(c, s, grid);
    REQUIRE(r.size() == 1);
    CHECK(r[0].value == 0.0);
    CHECK(r[0].snr_db == 60.0);
  }
}

TEST_CASE("ber needs at least 1e5 bits per point") {
  const auto c = flat_cfg(4, 10);
  const std::vector<double> grid{10.0};
  CHECK_THROWS_AS(simulate_ber(c, harness::Scheme::kSiso, grid), std::domain_error);
}

TEST_CASE("siso rayleigh ber matches the closed form") {
  const auto c = flat_cfg(1, 1000);
  const std::vector<double> grid{10.0, 15.0, 20.0};
  const auto r = simulate_ber(c, harness::Scheme::kSiso, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double oracle = rayleigh_16qam_ber(numerics::db_to_linear(grid[i]));
    CHECK(std::abs(r[i].value - oracle) / oracle < 0.10);
  }
}

TEST_CASE("bctas beats siso on a frequency-selective channel") {
  auto c = flat_cfg(4, 200);
  c.channel.model = "tgn_f";
  const std::vector<double> grid{5.0, 10.0, 15.0, 20.0, 25.0};
  const auto a = simulate_ber(c, harness::Scheme::kBctas, grid);
  const auto b = simulate_ber(c, harness::Scheme::kSiso, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a[i].value <= b[i].value);
}

TEST_CASE("mimo ber runs and improves with snr") {
  auto c = flat_cfg(2, 100);
  c.dims.n_r = 2;
  const std::vector<double> grid{5.0, 25.0};
  const auto r = simulate_ber(c, harness::Scheme::kMmseMimo, grid);
  CHECK(r[1].value < r[0].value);
}

TEST_CASE("post-selection snr distributions") {
  const double snr_db = 10.0, g = 10.0;
  const auto siso = sinr_samples(flat_cfg(1, 400), harness::Scheme::kSiso, snr_db, 400);
  REQUIRE(siso.size() == 400 * 256);
  CHECK(ks_distance(siso, [&](double x) { return 1.0 - std::exp(-x / g); }) < 0.01);
  const auto mg = sinr_samples(flat_cfg(4, 400), harness::Scheme::kMaxGain, snr_db, 400);
  CHECK(ks_distance(mg, [&](double x) { return std::pow(1.0 - std::exp(-x / g), 4.0); }) < 0.01);
}

TEST_CASE("very high snr pushes every sample up") {
  const auto s = sinr_samples(flat_cfg(2, 10), harness::Scheme::kMaxGain, 300.0, 10);
  CHECK(*std::min_element(s.begin(), s.end()) > 1e20);
}

TEST_CASE("outage probability") {
  const std::vector<double> hi(10, 100.0);
  CHECK(outage_probability(hi, 7.0) == 0.0);
  const std::vector<double> mix{1.0, 2.0, 10.0, 20.0};
  CHECK(outage_probability(mix, 10.0) == 0.5);
  CHECK_THROWS_AS(outage_probability(std::vector<double>{}, 7.0), std::domain_error);
  const auto s = sinr_samples(flat_cfg(1, 4000), harness::Scheme::kSiso, 16.0, 4000);
  const double oracle = 1.0 - std::exp(-std::pow(10.0, 0.7) / std::pow(10.0, 1.6));
  CHECK(oracle == Approx(0.118).margin(0.001));
  const double p1 = outage_probability(s, 7.0);
  CHECK(p1 == Approx(oracle).margin(0.005));
  const auto s4 = sinr_samples(flat_cfg(4, 4000), harness::Scheme::kMaxGain, 16.0, 4000);
  CHECK(std::abs(outage_probability(s4, 7.0) - std::pow(oracle, 4)) / std::pow(oracle, 4) < 0.15);
}

TEST_CASE("outage falls by the siso probability per added antenna") {
  for (std::size_t n = 1; n < 4; ++n) {
    const auto a = sinr_samples(flat_cfg(n, 4000), harness::Scheme::kMaxGain, 10.0, 4000);
    const auto b = sinr_samples(flat_cfg(n + 1, 4000), harness::Scheme::kMaxGain, 10.0, 4000);
    const auto s = sinr_samples(flat_cfg(1, 4000), harness::Scheme::kSiso, 10.0, 4000);
    const double step = std::log(outage_probability(b, 7.0)) - std::log(outage_probability(a, 7.0));
    const double slope = std::log(outage_probability(s, 7.0));
    CHECK(std::abs(step - slope) / std::abs(slope) < 0.2);
  }
}

TEST_CASE("tag signal through a transparent channel") {
  RngStream rng(6, 1);
  const auto x = random_qam(rng, 64);
  ChannelTensor ones(3, 1, 64, 1.0);
  for (auto& h : ones.raw()) h = 1.0;
  SelectionMap map(64);
  for (auto& j : map) j = static_cast<std::uint32_t>(rng.uniform_index(3));
  const auto y = tag_time_signal(map, ones, x, 4);
  const auto ref = waveform::ofdm_symbol(x, 4);
  REQUIRE(y.size() == ref.size());
  for (std::size_t i = 0; i < y.size(); ++i) REQUIRE(std::abs(y[i] - 2.0 * ref[i]) < 1e-12);
}

TEST_CASE("tag signal energy") {
  RngStream rng(6, 2);
  const auto x = random_qam(rng, 256);
  ChannelTensor h(4, 1, 256, 1.0);
  for (auto& v : h.raw()) v = numerics::gaussian_complex(rng, 1.0);
  SelectionMap map(256);
  for (auto& j : map) j = static_cast<std::uint32_t>(rng.uniform_index(4));
  const auto y = tag_time_signal(map, h, x, 4);
  double e = 0.0;
  for (std::size_t k = 0; k < 256; ++k) e += std::norm(h.at(map[k], 0, k) * x[k]);
  CHECK(numerics::energy(y) / 4.0 == Approx(e).margin(1e-10));
}

TEST_CASE("crest factor definition") {
  CVector tone(64, Complex{});
  tone[5] = Complex{0.3, 0.4};
  ChannelTensor ones(1, 1, 64, 1.0);
  for (auto& h : ones.raw()) h = 1.0;
  const auto y = tag_time_signal(SelectionMap(64, 0), ones, tone, 4);
  CHECK(bcf(y) == Approx(1.0).margin(1e-12));
  CVector impulse(32, Complex{});
  impulse[3] = 1.0;
  CHECK(bcf(impulse) == Approx(32.0));
  CHECK_THROWS_AS(bcf(CVector(8, Complex{})), std::domain_error);
  RngStream rng(6, 3);
  CVector batch;
  for (int s = 0; s < 3; ++s) {
    const auto x = random_qam(rng, 64);
    batch.insert(batch.end(), x.begin(), x.end());
  }
  const auto per = bcf_batch(SelectionMap(64, 0), ones, batch, 4);
  REQUIRE(per.size() == 3);
  for (double v : per) CHECK(v >= 1.0);
}

TEST_CASE("sensor dynamic range") {
  CHECK(sdr_db(1e-3, 1e-3, 0.0) == Approx(0.0).margin(1e-12));
  CHECK(sdr_db(1.0, 1e-9, 0.5) - sdr_db(1.0, 1e-9, 1.0) == Approx(10.0 * std::log10(2.0)).margin(1e-6));
  CHECK_THROWS_AS(sdr_db(1.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("harvesting efficiency") {
  const std::vector<double> p{0.1, 0.5, 2.0};
  CHECK(harvesting_efficiency(p, 0.0) == 1.0);
  CHECK(harvesting_efficiency(p, 3.0) == 0.0);
  CHECK(harvesting_efficiency(p, 0.5) == Approx(2.0 / 3.0));
  RngStream rng(6, 4);
  std::vector<double> e(100000);
  for (auto& v : e) v = -0.7 * std::log(1.0 - rng.uniform());
  CHECK(harvesting_efficiency(e, 0.7) == Approx(std::exp(-1.0)).epsilon(0.02));
}

TEST_CASE("victim suppression") {
  RngStream rng(6, 5);
  ChannelTensor v(4, 1, 128, 1.0);
  for (auto& h : v.raw()) h = numerics::gaussian_complex(rng, 1.0);
  const auto m = selection::maxgain_select(v);
  CHECK(interference_suppression(m, m, v) == 0.0);
  SelectionMap low(128);
  for (std::size_t k = 0; k < 128; ++k) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < 4; ++j) {
      if (v.power(j, k) < v.power(best, k)) best = j;
    }
    low[k] = static_cast<std::uint32_t>(best);
  }
  CHECK(interference_suppression(low, m, v) > 0.0);
  CHECK(victim_power(low, v) <= victim_power(m, v));
}

TEST_CASE("energy efficiency") {
  const PowerModel a{100.0, 0.0}, b{200.0, 0.0};
  CHECK(energy_efficiency(4.0, 1, b) == Approx(energy_efficiency(4.0, 1, a) / 2.0));
  const PowerModel pm{100.0, 1e-6};
  CHECK(energy_efficiency(4.0, 1, pm) / energy_efficiency(4.0, 4, pm) == Approx(4.0).epsilon(1e-6));
  CHECK_THROWS_AS(energy_efficiency(4.0, 1, PowerModel{0.0, 0.0}), std::domain_error);
}

TEST_CASE("flattening weight and envelope fluctuation") {
  // Incident-power variance at the tag for lambda_T in {0, 0.5, 1}.
  auto c = flat_cfg(4, 1000);
  c.channel.model = "tgn_d";
  c.weights.lambda_victim = 0.0;
  std::vector<double> p_b;
  for (double lt : {0.0, 0.5, 1.0}) {
    c.weights.lambda_tag = lt;
    double s1 = 0.0, s2 = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
      const auto set = draw_channels(c, t);
      const auto map = select_antennas(harness::Scheme::kBctas, set, c, t);
      auto rng = trial_stream(c.seed, Purpose::kData, t);
      const auto y = tag_time_signal(map, set.tag, random_qam(rng, c.dims.n_c), 4);
      for (const auto& v : y) {
        s1 += std::norm(v);
        s2 += std::norm(v) * std::norm(v);
      }
      n += y.size();
    }
    const double m = s1 / static_cast<double>(n);
    p_b.push_back(s2 / static_cast<double>(n) - m * m);
  }
  CHECK(p_b[1] <= p_b[0]);
  CHECK(p_b[2] <= p_b[1]);
}
