// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bctas/campaign.hpp"
#include "bctas/csv.hpp"
#include "bctas/frontend.hpp"
#include "bctas/metrics.hpp"
#include "bctas/oracle.hpp"
#include "bctas/selection.hpp"
#include "bctas/tracking.hpp"

using namespace bctas;
using namespace bctas::harness;
using metrics::Metric;
using metrics::MetricRecord;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

RunOptions workers() {
  RunOptions o;
  o.parallelism = std::max(1u, std::thread::hardware_concurrency());
  return o;
}

ScenarioConfig unit_links(ScenarioConfig c) {
  c.channel.d_ref_m = 1.0;
  c.channel.d_l_m = 1.0;
  c.channel.d_t_m = 1.0;
  c.channel.d_v_m = 1.0;
  return c;
}

ScenarioConfig flat_cfg(std::size_t n_t, std::size_t trials) {
  ScenarioConfig c;
  c.dims.n_t = n_t;
  c.dims.n_r = 1;
  c.dims.n_c = 256;
  c.channel.model = "flat";
  c.trials = trials;
  c.seed = 2024;
  return unit_links(c);
}

std::vector<const MetricRecord*> rows(const CampaignResult& r, Scheme s, Metric m) {
  std::vector<const MetricRecord*> out;
  for (const auto& rec : r.records) {
    if (rec.scheme == s && rec.metric == m) out.push_back(&rec);
  }
  return out;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---------------------------------------------------------------- 1

Outcome order_statistics() {
  const auto cfg = flat_cfg(4, 3907);  // 3907 x 256 >= 1e6 samples
  const auto slots = run_trials<double>(cfg.trials, workers(), [&](std::size_t t) {
    const auto set = metrics::draw_channels(cfg, t);
    const auto map = selection::maxgain_select(set.legit_est);
    double s = 0.0;
    for (std::size_t k = 0; k < cfg.dims.n_c; ++k) s += set.legit.power(map[k], k);
    return s;
  });
  double sum = 0.0;
  for (const auto& s : slots) sum += *s;
  const double n = static_cast<double>(cfg.trials * cfg.dims.n_c);
  const double mean = sum / n;
  const double target = oracle::expected_max_gain(1.0, 4);
  const double e = rel(mean, target);
  return {e <= 0.01, fmt::format("samples={:.0f} mean={:.5f} H_4={:.5f} rel_err={:.3f}% (limit 1%)", n,
                                 mean, target, 100.0 * e)};
}

// ---------------------------------------------------------------- 2, 3

struct NullingSums {
  double legit_sel = 0.0, legit_max = 0.0, victim_sel = 0.0, victim_max = 0.0;
};

NullingSums nulling_regime(std::size_t n_t, std::size_t trials) {
  auto cfg = flat_cfg(n_t, trials);
  cfg.weights.lambda_tag = 0.0;
  cfg.weights.lambda_victim = 1e6;
  const auto slots = run_trials<NullingSums>(cfg.trials, workers(), [&](std::size_t t) {
    const auto set = metrics::draw_channels(cfg, t);
    const auto sel = metrics::select_antennas(Scheme::kBctas, set, cfg, t);
    const auto ref = selection::maxgain_select(set.legit_est);
    NullingSums s;
    for (std::size_t k = 0; k < cfg.dims.n_c; ++k) {
      s.legit_sel += set.legit.power(sel[k], k);
      s.legit_max += set.legit.power(ref[k], k);
      s.victim_sel += set.victim.power(sel[k], k);
      s.victim_max += set.victim.power(ref[k], k);
    }
    return s;
  });
  NullingSums tot;
  for (const auto& s : slots) {
    tot.legit_sel += s->legit_sel;
    tot.legit_max += s->legit_max;
    tot.victim_sel += s->victim_sel;
    tot.victim_max += s->victim_max;
  }
  return tot;
}

Outcome selection_penalty() {
  const auto s = nulling_regime(8, 2000);
  const double ratio = s.legit_sel / s.legit_max;
  const double target = 0.368;
  return {std::abs(ratio - target) <= 0.01,
          fmt::format("ratio={:.4f} target=0.368+-0.01 (1/H_8={:.4f})", ratio, oracle::selection_penalty(8))};
}

Outcome interference_scaling() {
  const std::size_t trials = 2000;
  const auto s = nulling_regime(4, trials);
  const double n = static_cast<double>(trials * 256);
  const double mean_v = s.victim_sel / n;
  const double di = 10.0 * std::log10(s.victim_max / s.victim_sel);
  const bool ok = rel(mean_v, 0.25) <= 0.02 && std::abs(di - 6.02) <= 1.0;
  return {ok, fmt::format("mean_victim={:.5f} target=0.25 rel_err={:.2f}% (limit 2%); delta_I={:.3f} dB "
                          "target=6.02+-1",
                          mean_v, 100.0 * rel(mean_v, 0.25), di)};
}

// ---------------------------------------------------------------- 4

Outcome diversity_outage() {
  const std::size_t trials = 4000;  // 1.024e6 samples
  const double snr = 16.0, th = 7.0;
  auto siso_cfg = flat_cfg(1, trials);
  auto mg_cfg = flat_cfg(4, trials);
  const auto s1 = metrics::sinr_samples(siso_cfg, Scheme::kSiso, snr, trials, workers());
  const auto s4 = metrics::sinr_samples(mg_cfg, Scheme::kMaxGain, snr, trials, workers());
  const double p1 = metrics::outage_probability(s1, th);
  const double p4 = metrics::outage_probability(s4, th);
  const double a1 = oracle::siso_outage(numerics::db_to_linear(th), numerics::db_to_linear(snr));
  const double a4 = oracle::diversity_outage(a1, 4);
  const bool ok = s4.size() >= 1000000 && rel(p1, a1) <= 0.05 && rel(p4, a4) <= 0.20;
  return {ok, fmt::format("samples={} P_siso={:.5f} vs {:.5f} ({:.2f}%, limit 5%); P_4={:.3e} vs {:.3e} "
                          "({:.1f}%, limit 20%)",
                          s4.size(), p1, a1, 100.0 * rel(p1, a1), p4, a4, 100.0 * rel(p4, a4))};
}

// ---------------------------------------------------------------- 5

ScenarioConfig bcf_cfg() {
  ScenarioConfig c;
  c.dims.n_c = 256;
  c.dims.n_r = 1;
  c.dims.oversample = 4;
  c.trials = 1000;
  c.seed = 77;
  c.schemes = {Scheme::kBctas, Scheme::kMaxGain};
  c.weights.lambda_tag = 1.0;
  c.csi.kalman.enabled = true;
  c.sweep.n_t = {2, 4, 8};
  return c;
}

Outcome bcf_ordering() {
  const auto res = run_campaign(bcf_cfg(), Experiment::kBcf, workers());
  const auto b = rows(res, Scheme::kBctas, Metric::kBcfDb);
  const auto m = rows(res, Scheme::kMaxGain, Metric::kBcfDb);
  bool ok = b.size() == 3 && m.size() == 3;
  std::string d;
  for (std::size_t i = 0; i < std::min(b.size(), m.size()); ++i) {
    ok = ok && b[i]->value <= m[i]->value;
    if (i) ok = ok && b[i]->value <= b[i - 1]->value;
    d += fmt::format("N_t={}: bctas={:.3f} maxgain={:.3f} dB; ", *b[i]->n_t, b[i]->value, m[i]->value);
  }
  return {ok, d + "need bctas<=maxgain and bctas non-increasing in N_t"};
}

// ---------------------------------------------------------------- 6

Outcome papr_ordering() {
  ScenarioConfig c;
  c.dims.n_t = 4;
  c.dims.n_r = 4;
  c.dims.n_c = 256;
  c.dims.oversample = 4;
  c.trials = 25000;
  c.symbols_per_trial = 4;  // 1e5 OFDM symbols
  c.seed = 91;
  c.schemes = {Scheme::kBctas, Scheme::kMmseMimo};
  const auto res = run_campaign(c, Experiment::kPapr, workers());
  const double b = rows(res, Scheme::kBctas, Metric::kPaprDbAtCcdf).at(0)->value;
  const double m = rows(res, Scheme::kMmseMimo, Metric::kPaprDbAtCcdf).at(0)->value;
  return {m - b >= 1.0, fmt::format("PAPR@1e-2 bctas={:.3f} dB mmse_mimo={:.3f} dB gap={:.3f} dB (need >= 1)",
                                    b, m, m - b)};
}

// ---------------------------------------------------------------- 7

Outcome kalman() {
  const tracking::KalmanParams p{1e-4, 1e-2};
  tracking::KalmanState s{0.0, p.r, 0.0};
  for (int i = 0; i < 500; ++i) s = tracking::kalman_step(s, 0.0, p);
  const double gap = std::abs(s.gain - tracking::steady_state_gain(p));

  numerics::RngStream rng(7, 7);
  double raw = 0.0, smooth = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> truth(256), z(256);
    for (std::size_t k = 0; k < 256; ++k) {
      truth[k] = k < 128 ? 1.0 : 2.0;
      z[k] = truth[k] + std::sqrt(p.r) * rng.normal();
    }
    const auto x = tracking::kalman_smooth_track(z, p);
    for (std::size_t k = 0; k < 256; ++k) {
      raw += (z[k] - truth[k]) * (z[k] - truth[k]);
      smooth += (x[k] - truth[k]) * (x[k] - truth[k]);
    }
  }
  raw /= 256000.0;
  smooth /= 256000.0;
  return {gap <= 1e-6 && smooth < raw,
          fmt::format("|K_500 - K_inf|={:.2e} (limit 1e-6); step-track MSE smoothed={:.5f} raw={:.5f}",
                      gap, smooth, raw)};
}

// ---------------------------------------------------------------- 8

Outcome rapp_evm() {
  const frontend::RappParams p{1.0, 1.0, 2.0};
  const double y = frontend::rapp_amam(1.0, p);
  const double point_err = std::abs(y - std::pow(2.0, -0.25));
  ScenarioConfig c;
  c.dims.n_t = 4;
  c.dims.n_c = 256;
  c.trials = 100;
  c.seed = 13;
  c.schemes = {Scheme::kBctas, Scheme::kMaxGain};
  for (int i = 0; i <= 20; i += 2) c.sweep.ibo_db.push_back(i);
  const auto res = run_campaign(c, Experiment::kEvm, workers());
  bool mono = true;
  std::string d;
  for (auto s : c.schemes) {
    const auto e = rows(res, s, Metric::kEvmPct);
    for (std::size_t i = 1; i < e.size(); ++i) mono = mono && e[i]->value <= e[i - 1]->value;
    d += fmt::format("{} EVM {:.2f}%..{:.4f}%; ", to_string(s), e.front()->value, e.back()->value);
  }
  return {mono && point_err <= 1e-12 && !res.records.empty(),
          d + fmt::format("monotone={} rapp(A_sat)={:.6f} err={:.1e}", mono, y, point_err)};
}

// ---------------------------------------------------------------- 9

Outcome mask_compliance() {
  ScenarioConfig c;
  c.dims.n_t = 4;
  c.dims.n_c = 256;
  c.dims.oversample = 4;
  c.trials = 50;
  c.seed = 3;
  c.schemes = {Scheme::kBctas};
  c.pa.enabled = true;
  c.sweep.ibo_db = {10.0, 0.0};
  const auto res = run_campaign(c, Experiment::kMask, workers());
  const auto margin = rows(res, Scheme::kBctas, Metric::kMaskMarginDb);
  const auto side = rows(res, Scheme::kBctas, Metric::kSidebandDbr);
  if (margin.size() != 2 || side.size() != 2) return {false, "missing mask rows"};
  const bool ok = margin[0]->value >= 0.0 && side[0]->value < -45.0 && margin[1]->value < margin[0]->value;
  return {ok, fmt::format("IBO 10: margin={:.2f} dB sideband={:.2f} dBr (need >= 0, < -45); IBO 0: "
                          "margin={:.2f} dB (need below IBO 10)",
                          margin[0]->value, side[0]->value, margin[1]->value)};
}

// ---------------------------------------------------------------- 10

Outcome notch() {
  ScenarioConfig c;
  c.dims.n_t = 4;
  c.dims.n_r = 1;
  c.dims.n_c = 256;
  c.channel.model = "tgn_f";
  c.trials = 1000;
  c.seed = 29;
  c.weights.lambda_victim = 10.0;
  c.schemes = {Scheme::kBctas};
  const auto res = run_campaign(unit_links(c), Experiment::kNotch, workers());
  const double di = rows(res, Scheme::kBctas, Metric::kDeltaIDb).at(0)->value;
  const double f = rows(res, Scheme::kBctas, Metric::kNotchFraction).at(0)->value;
  return {di > 0.0 && f >= 0.05,
          fmt::format("delta_I={:.3f} dB (need > 0) notch_fraction={:.3f} (need >= 0.05)", di, f)};
}

// ---------------------------------------------------------------- 11

Outcome pareto() {
  ScenarioConfig c;
  c.dims.n_t = 8;
  c.dims.n_r = 1;
  c.dims.n_c = 256;
  c.channel.model = "tgn_f";
  c.snr_grid_db = {16.0};
  c.trials = 1000;
  c.seed = 31;
  c.schemes = {Scheme::kBctas};
  c.sweep.lambda_v = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  const auto res = run_campaign(unit_links(c), Experiment::kPareto, workers());
  const auto di = rows(res, Scheme::kBctas, Metric::kDeltaIDb);
  const auto ber = rows(res, Scheme::kBctas, Metric::kBer);
  if (di.size() != 7 || ber.size() != 7) return {false, "missing pareto rows"};
  const double b0 = ber[0]->value;
  bool mono = true, knee_ok = false, knee_seen = false, tail_ok = true, tail_seen = false;
  std::string d;
  for (std::size_t i = 0; i < 7; ++i) {
    if (i) mono = mono && di[i]->value >= di[i - 1]->value && ber[i]->value >= ber[i - 1]->value;
    if (!knee_seen && di[i]->value >= 4.0) {
      knee_seen = true;
      knee_ok = ber[i]->value < 10.0 * b0;
    }
    if (di[i]->value >= 6.0) {
      tail_seen = true;
      tail_ok = tail_ok && ber[i]->value > 10.0 * b0;
    }
    d += fmt::format("({:.2f} dB, {:.2e}) ", di[i]->value, ber[i]->value);
  }
  const bool ok = mono && knee_ok && tail_seen && tail_ok;
  return {ok, d + fmt::format("monotone={} knee<10xB0={} beyond6dB>10xB0={}", mono, knee_seen && knee_ok,
                              tail_seen && tail_ok)};
}

// ---------------------------------------------------------------- 12

Outcome degeneracy() {
  ScenarioConfig c;
  c.dims.n_t = 4;
  c.dims.n_c = 256;
  c.trials = 10000;
  c.seed = 101;
  c.weights.lambda_tag = 0.0;
  c.weights.lambda_victim = 0.0;
  c.csi.kalman.enabled = false;
  const auto slots = run_trials<std::size_t>(c.trials, workers(), [&](std::size_t t) {
    const auto set = metrics::draw_channels(c, t);
    const auto a = metrics::select_antennas(Scheme::kBctas, set, c, t);
    const auto b = selection::maxgain_select(set.legit_est);
    std::size_t diff = 0;
    for (std::size_t k = 0; k < c.dims.n_c; ++k) diff += a[k] != b[k];
    return diff;
  });
  std::size_t diff = 0, done = 0;
  for (const auto& s : slots) {
    if (!s) continue;
    diff += *s;
    ++done;
  }
  return {done == c.trials && diff == 0,
          fmt::format("channel sets={} mismatched subcarriers={} (need 0)", done, diff)};
}

// ---------------------------------------------------------------- 13

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  ScenarioConfig c;
  c.dims.n_t = 4;
  c.dims.n_c = 256;
  c.dims.n_cp = 32;
  c.trials = 200;
  c.seed = 55;
  c.snr_grid_db = {5.0, 15.0};
  c.schemes = {Scheme::kBctas, Scheme::kMaxGain, Scheme::kNbas};
  const auto root = std::filesystem::temp_directory_path() / "bctas_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<std::string> outputs;
  for (unsigned par : {1u, 8u, 1u}) {
    RunOptions o;
    o.parallelism = par;
    const auto dir = root / std::to_string(outputs.size());
    write_campaign(run_campaign(c, Experiment::kBer, o), dir);
    outputs.push_back(slurp(dir / "results.csv"));
  }
  std::filesystem::remove_all(root);
  const bool ok = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  return {ok, fmt::format("results.csv {} bytes; parallelism 1 vs 8 {}; rerun {}", outputs[0].size(),
                          outputs[0] == outputs[1] ? "identical" : "differs",
                          outputs[0] == outputs[2] ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "max-gain order statistics", 10, order_statistics},
      {2, "nulling-regime selection penalty", 30, selection_penalty},
      {3, "nulling-regime interference scaling", 30, interference_scaling},
      {4, "selection diversity outage", 120, diversity_outage},
      {5, "backscatter coupling ordering", 300, bcf_ordering},
      {6, "PAPR advantage over MIMO", 300, papr_ordering},
      {7, "Kalman convergence and smoothing", 10, kalman},
      {8, "Rapp point and EVM monotonicity", 60, rapp_evm},
      {9, "spectral mask compliance", 60, mask_compliance},
      {10, "victim notching", 120, notch},
      {11, "interference/BER trade-off", 600, pareto},
      {12, "max-gain degeneracy", 10, degeneracy},
      {13, "reproducibility", 60, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && s <= c.budget_s;
    failed += !pass;
    fmt::print("{} criterion {:2} {}: {} | {:.1f} s (budget {:.0f} s)\n", pass ? "PASS" : "FAIL", c.id,
               c.name, o.detail, s, c.budget_s);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
