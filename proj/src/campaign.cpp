// SPDX-License-Identifier: Apache-2.0

#include "bctas/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fmt/format.h>
#include <stdexcept>

#include "bctas/csv.hpp"
#include "bctas/frontend.hpp"
#include "bctas/oracle.hpp"
#include "bctas/selection.hpp"
#include "bctas/waveform.hpp"

namespace bctas::harness {

using metrics::Metric;
using metrics::MetricRecord;
using metrics::Purpose;

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kBer: return "ber";
    case Experiment::kOutage: return "outage";
    case Experiment::kBcf: return "bcf";
    case Experiment::kPapr: return "papr";
    case Experiment::kEvm: return "evm";
    case Experiment::kMask: return "mask";
    case Experiment::kPareto: return "pareto";
    case Experiment::kCorrelation: return "correlation";
    case Experiment::kNotch: return "notch";
    case Experiment::kOracle: return "oracle";
  }
  return "unknown";
}

std::vector<Experiment> all_experiments() {
  return {Experiment::kBer,  Experiment::kOutage, Experiment::kBcf,         Experiment::kPapr,
          Experiment::kEvm,  Experiment::kMask,   Experiment::kPareto,      Experiment::kCorrelation,
          Experiment::kNotch, Experiment::kOracle};
}

Experiment experiment_from_string(std::string_view s) {
  for (auto e : all_experiments()) {
    if (to_string(e) == s) return e;
  }
  throw std::invalid_argument(fmt::format("unknown experiment \"{}\"", s));
}

std::string rfc3339_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1,
                     tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
}

namespace {

std::string kalman_label(const ScenarioConfig& cfg) {
  return cfg.csi.kalman.enabled ? std::string(selection::to_string(cfg.csi.kalman.mode)) : "off";
}

MetricRecord make_row(const ScenarioConfig& cfg, Scheme scheme, Metric metric, double value,
                      std::size_t n_trials, std::optional<double> snr_db = std::nullopt) {
  MetricRecord r;
  r.scheme = scheme;
  r.metric = metric;
  r.snr_db = snr_db;
  r.value = value;
  r.n_trials = n_trials;
  r.seed = cfg.seed;
  r.n_t = cfg.dims.n_t;
  r.model_tag = cfg.channel.model;
  r.sigma_e = cfg.csi.sigma_e;
  r.rho = cfg.channel.rho;
  if (scheme == Scheme::kBctas) {
    r.lambda_t = cfg.weights.lambda_tag;
    r.lambda_v = cfg.weights.lambda_victim;
    r.kalman_mode = kalman_label(cfg);
  }
  if (cfg.pa.enabled) r.ibo_db = cfg.pa.ibo_db;
  return r;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> fallback) {
  return v.empty() ? fallback : v;
}

void announce(const RunOptions& opts, std::string label, std::size_t total) {
  if (opts.status) opts.status->begin(std::move(label), total);
}

template <class R>
std::size_t successes(const std::vector<std::optional<R>>& slots) {
  return static_cast<std::size_t>(
      std::count_if(slots.begin(), slots.end(), [](const auto& s) { return s.has_value(); }));
}

waveform::OfdmParams ofdm_params(const ScenarioConfig& cfg) {
  waveform::OfdmParams p;
  p.n_sc = cfg.dims.n_c;
  p.n_cp = cfg.dims.n_cp;
  p.oversample = cfg.dims.oversample;
  p.bandwidth_hz = cfg.pa.occupied_bw_mhz * 1e6;
  p.transition = static_cast<std::size_t>(
      std::round(cfg.pa.transition_ns * 1e-9 * p.sample_rate_hz()));
  return p;
}

// QAM symbols for `streams` independent streams of the trial, symbol-major.
std::vector<CVector> trial_symbols(const ScenarioConfig& cfg, std::uint64_t trial,
                                   std::size_t streams) {
  auto rng = metrics::trial_stream(cfg.seed, Purpose::kData, trial);
  const unsigned nb = waveform::bits_per_symbol(cfg.modulation);
  std::vector<CVector> out(streams);
  for (auto& x : out) {
    waveform::Bits bits(cfg.symbols_per_trial * cfg.dims.n_c * nb);
    for (auto& b : bits) b = rng.bit();
    x = waveform::qam_map(bits, cfg.modulation);
  }
  return out;
}

std::vector<Scheme> tas_schemes(const ScenarioConfig& cfg) {
  std::vector<Scheme> out;
  for (auto s : cfg.schemes) {
    if (is_tas(s)) out.push_back(s);
  }
  return out;
}

bool has_scheme(const ScenarioConfig& cfg, Scheme s) {
  return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end();
}

// ---------------------------------------------------------------- ber

void add_ber_rows(const ScenarioConfig& cfg, Scheme scheme, const RunOptions& opts,
                  CampaignResult& res, bool with_ee) {
  announce(opts, fmt::format("ber {}", to_string(scheme)), cfg.trials);
  const auto rows = metrics::simulate_ber(cfg, scheme, cfg.snr_grid_db, opts);
  const std::size_t streams = is_tas(scheme) ? 1 : cfg.dims.n_t;
  const std::size_t chains = is_tas(scheme) ? 1 : cfg.dims.n_t;
  const metrics::PowerModel pm{cfg.power_model.p_chain_mw, cfg.power_model.p_sel_mw};
  const double nb = waveform::bits_per_symbol(cfg.modulation);
  for (const auto& r : rows) {
    res.records.push_back(make_row(cfg, scheme, Metric::kBer, r.value, r.n_trials, r.snr_db));
    if (with_ee) {
      const double se = static_cast<double>(streams) * nb * (1.0 - r.value);
      res.records.push_back(make_row(cfg, scheme, Metric::kEe,
                                     metrics::energy_efficiency(se, chains, pm), r.n_trials,
                                     r.snr_db));
    }
  }
}

void run_ber(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  for (auto s : cfg.schemes) add_ber_rows(cfg, s, opts, res, true);
}

// ---------------------------------------------------------------- outage

void run_outage(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  for (std::size_t n_t : or_default<std::size_t>(cfg.sweep.n_t, {1, 2, 3, 4})) {
    ScenarioConfig c = cfg;
    c.dims.n_t = n_t;
    for (auto s : c.schemes) {
      for (double snr : c.snr_grid_db) {
        announce(opts, fmt::format("outage {} n_t={} snr={}", to_string(s), n_t, snr), c.trials);
        const auto g = metrics::sinr_samples(c, s, snr, c.trials, opts);
        res.records.push_back(make_row(c, s, Metric::kOutage,
                                       metrics::outage_probability(g, c.gamma_th_db), c.trials,
                                       snr));
      }
    }
  }
}

// ---------------------------------------------------------------- bcf

struct BcfTrial {
  double bcf_sum = 0.0;
  std::size_t symbols = 0;
  double p_sum = 0.0;   // incident instantaneous power
  double p2_sum = 0.0;
  std::size_t samples = 0;
  std::size_t harvest_hits = 0;
  std::size_t harvest_n = 0;
  std::size_t evaluations = 0;
};

BcfTrial bcf_trial(const ScenarioConfig& cfg, Scheme scheme, std::uint64_t t) {
  const auto set = metrics::draw_channels(cfg, t);
  const auto x = trial_symbols(cfg, t, 1)[0];
  BcfTrial out;
  const auto map = metrics::select_antennas(scheme, set, cfg, t, &out.evaluations);
  const std::size_t n_c = cfg.dims.n_c;
  for (std::size_t s = 0; s < cfg.symbols_per_trial; ++s) {
    const auto y = metrics::tag_time_signal(map, set.tag, std::span(x).subspan(s * n_c, n_c),
                                            cfg.dims.oversample);
    out.bcf_sum += metrics::bcf(y);
    ++out.symbols;
    for (const auto& v : y) {
      const double p = std::norm(v);
      out.p_sum += p;
      out.p2_sum += p * p;
    }
    out.samples += y.size();
  }
  std::vector<double> incident(n_c);
  for (std::size_t k = 0; k < n_c; ++k) {
    incident[k] = cfg.weights.tx_power * set.tag.power(map[k], k);
  }
  out.harvest_hits = static_cast<std::size_t>(
      std::llround(metrics::harvesting_efficiency(incident, cfg.tag.p_th) * static_cast<double>(n_c)));
  out.harvest_n = n_c;
  return out;
}

void run_bcf(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  SideTable complexity{"complexity.csv", {"n_t", "n_c", "evaluations_per_map", "n_c_times_n_t"}, {}};
  for (std::size_t n_t : or_default<std::size_t>(cfg.sweep.n_t, {2, 4, 8})) {
    for (auto s : tas_schemes(cfg)) {
      std::vector<double> lambdas{cfg.weights.lambda_tag};
      if (s == Scheme::kBctas && !cfg.sweep.lambda_t.empty()) lambdas = cfg.sweep.lambda_t;
      for (double lt : lambdas) {
        ScenarioConfig c = cfg;
        c.dims.n_t = n_t;
        c.weights.lambda_tag = lt;
        announce(opts, fmt::format("bcf {} n_t={} lambda_t={}", to_string(s), n_t, lt), c.trials);
        const auto slots = run_trials<BcfTrial>(c.trials, opts,
                                                [&](std::size_t t) { return bcf_trial(c, s, t); });
        BcfTrial tot;
        for (const auto& sl : slots) {
          if (!sl) continue;
          tot.bcf_sum += sl->bcf_sum;
          tot.symbols += sl->symbols;
          tot.p_sum += sl->p_sum;
          tot.p2_sum += sl->p2_sum;
          tot.samples += sl->samples;
          tot.harvest_hits += sl->harvest_hits;
          tot.harvest_n += sl->harvest_n;
          tot.evaluations += sl->evaluations;
        }
        const std::size_t ok = successes(slots);
        if (ok == 0) throw CampaignError("bcf: no successful trials");
        const double mean_bcf = tot.bcf_sum / static_cast<double>(tot.symbols);
        const double mean_p = tot.p_sum / static_cast<double>(tot.samples);
        const double var_p = std::max(tot.p2_sum / static_cast<double>(tot.samples) - mean_p * mean_p, 0.0);
        res.records.push_back(make_row(c, s, Metric::kBcfDb, numerics::linear_to_db(mean_bcf), ok));
        res.records.push_back(make_row(
            c, s, Metric::kSdrDb,
            metrics::sdr_db(c.tag.rho_refl * mean_p, c.tag.noise_var, var_p), ok));
        res.records.push_back(make_row(
            c, s, Metric::kEtaH,
            static_cast<double>(tot.harvest_hits) / static_cast<double>(tot.harvest_n), ok));
        if (s == Scheme::kBctas && lt == lambdas.front()) {
          complexity.rows.push_back({std::to_string(n_t), std::to_string(c.dims.n_c),
                                     format_number(static_cast<double>(tot.evaluations) /
                                                   static_cast<double>(ok)),
                                     std::to_string(c.dims.n_c * n_t)});
        }
      }
    }
  }
  if (!complexity.rows.empty()) res.tables.push_back(std::move(complexity));
}

// ---------------------------------------------------------------- papr

std::vector<double> papr_trial(const ScenarioConfig& cfg, Scheme scheme, std::uint64_t t) {
  const std::size_t n_c = cfg.dims.n_c;
  const std::size_t n_t = cfg.dims.n_t;
  const std::size_t os = cfg.dims.oversample;
  std::vector<double> out;
  if (scheme == Scheme::kMmseMimo) {
    const auto xs = trial_symbols(cfg, t, n_t);
    for (std::size_t s = 0; s < cfg.symbols_per_trial; ++s) {
      for (std::size_t j = 0; j < n_t; ++j) {
        const auto body = waveform::ofdm_symbol(std::span(xs[j]).subspan(s * n_c, n_c), os);
        out.push_back(waveform::papr_db(body));
      }
    }
    return out;
  }
  const auto set = metrics::draw_channels(cfg, t);
  const auto map = metrics::select_antennas(scheme, set, cfg, t);
  const auto x = trial_symbols(cfg, t, 1)[0];
  CVector spec(n_c);
  for (std::size_t s = 0; s < cfg.symbols_per_trial; ++s) {
    for (std::size_t j = 0; j < n_t; ++j) {
      bool active = false;
      for (std::size_t k = 0; k < n_c; ++k) {
        const bool mine = map[k] == j;
        active |= mine;
        spec[k] = mine ? x[s * n_c + k] : Complex{};
      }
      if (!active) continue;
      out.push_back(waveform::papr_db(waveform::ofdm_symbol(spec, os)));
    }
  }
  return out;
}

void run_papr(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  SideTable curve{"papr_ccdf.csv", {"scheme", "n_t", "threshold_db", "ccdf"}, {}};
  std::vector<double> thresholds;
  for (int i = 0; i <= 64; ++i) thresholds.push_back(0.25 * i);
  for (auto s : cfg.schemes) {
    announce(opts, fmt::format("papr {}", to_string(s)), cfg.trials);
    const auto slots = run_trials<std::vector<double>>(
        cfg.trials, opts, [&](std::size_t t) { return papr_trial(cfg, s, t); });
    std::vector<double> all;
    for (const auto& sl : slots) {
      if (sl) all.insert(all.end(), sl->begin(), sl->end());
    }
    if (all.empty()) throw CampaignError("papr: no samples");
    res.records.push_back(make_row(cfg, s, Metric::kPaprDbAtCcdf,
                                   waveform::value_at_ccdf(all, cfg.ccdf_level), successes(slots)));
    const auto p = waveform::ccdf(all, thresholds);
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      curve.rows.push_back({std::string(to_string(s)), std::to_string(cfg.dims.n_t),
                            format_number(thresholds[i]), format_number(p[i])});
    }
  }
  res.tables.push_back(std::move(curve));
}

// ---------------------------------------------------------------- evm / mask

// Per-antenna time streams for one trial: TAS schemes follow the selection
// map, mmse_mimo carries one full stream per antenna at 1/N_t power.
struct TxStreams {
  waveform::PerAntennaWaveform wave;
  std::vector<CVector> ref;                    // per antenna, n_syms * n_c
  std::vector<std::vector<bool>> active;       // per antenna, per subcarrier
};

TxStreams tx_streams(const ScenarioConfig& cfg, Scheme scheme, std::uint64_t t) {
  const std::size_t n_c = cfg.dims.n_c;
  const std::size_t n_t = cfg.dims.n_t;
  const auto params = ofdm_params(cfg);
  TxStreams out;
  out.ref.resize(n_t);
  out.active.assign(n_t, std::vector<bool>(n_c, false));
  if (scheme == Scheme::kMmseMimo) {
    auto xs = trial_symbols(cfg, t, n_t);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    std::vector<waveform::OfdmGrid> grids;
    for (std::size_t j = 0; j < n_t; ++j) {
      for (auto& v : xs[j]) v *= scale;
      grids.push_back({params, cfg.modulation, cfg.symbols_per_trial, xs[j]});
      out.ref[j] = xs[j];
      out.active[j].assign(n_c, true);
    }
    out.wave = waveform::ofdm_modulate_streams(grids);
    return out;
  }
  const auto set = metrics::draw_channels(cfg, t);
  const auto map = metrics::select_antennas(scheme, set, cfg, t);
  const auto x = trial_symbols(cfg, t, 1)[0];
  const waveform::OfdmGrid grid{params, cfg.modulation, cfg.symbols_per_trial, x};
  out.wave = waveform::ofdm_modulate(grid, map, n_t);
  for (std::size_t j = 0; j < n_t; ++j) {
    out.ref[j].assign(x.size(), Complex{});
    for (std::size_t k = 0; k < n_c; ++k) out.active[j][k] = map[k] == j;
    for (std::size_t s = 0; s < cfg.symbols_per_trial; ++s) {
      for (std::size_t k = 0; k < n_c; ++k) {
        if (map[k] == j) out.ref[j][s * n_c + k] = x[s * n_c + k];
      }
    }
  }
  return out;
}

std::vector<frontend::EvmAccumulator> evm_trial(const ScenarioConfig& cfg, Scheme scheme,
                                                std::span<const double> ibos, std::uint64_t t) {
  const auto tx = tx_streams(cfg, scheme, t);
  const auto params = ofdm_params(cfg);
  const std::size_t n_c = cfg.dims.n_c;
  std::vector<frontend::EvmAccumulator> acc(ibos.size());
  CVector ref, rx;
  for (std::size_t j = 0; j < tx.wave.antennas.size(); ++j) {
    if (numerics::energy(tx.ref[j]) == 0.0) continue;
    for (std::size_t i = 0; i < ibos.size(); ++i) {
      const auto amp = frontend::apply_pa(tx.wave.antennas[j], ibos[i], cfg.pa.rapp);
      const auto got = waveform::ofdm_demodulate(amp, params, cfg.symbols_per_trial);
      ref.clear();
      rx.clear();
      for (std::size_t s = 0; s < cfg.symbols_per_trial; ++s) {
        for (std::size_t k = 0; k < n_c; ++k) {
          if (!tx.active[j][k]) continue;
          ref.push_back(tx.ref[j][s * n_c + k]);
          rx.push_back(got[s * n_c + k]);
        }
      }
      acc[i].add(ref, rx);
    }
  }
  return acc;
}

std::vector<double> default_ibo_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; i += 2) g.push_back(i);
  return g;
}

void run_evm(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  const auto ibos = or_default(cfg.sweep.ibo_db, default_ibo_grid());
  for (auto s : cfg.schemes) {
    announce(opts, fmt::format("evm {}", to_string(s)), cfg.trials);
    const auto slots = run_trials<std::vector<frontend::EvmAccumulator>>(
        cfg.trials, opts, [&](std::size_t t) { return evm_trial(cfg, s, ibos, t); });
    std::vector<frontend::EvmAccumulator> tot(ibos.size());
    for (const auto& sl : slots) {
      if (!sl) continue;
      for (std::size_t i = 0; i < ibos.size(); ++i) tot[i].merge((*sl)[i]);
    }
    for (std::size_t i = 0; i < ibos.size(); ++i) {
      auto row = make_row(cfg, s, Metric::kEvmPct, tot[i].percent(), successes(slots));
      row.ibo_db = ibos[i];
      res.records.push_back(row);
    }
  }
}

std::vector<double> mask_trial(const ScenarioConfig& cfg, Scheme scheme, double ibo,
                               std::uint64_t t) {
  const auto tx = tx_streams(cfg, scheme, t);
  const std::size_t seg = ofdm_params(cfg).fft_len();
  std::vector<double> acc;
  for (std::size_t j = 0; j < tx.wave.antennas.size(); ++j) {
    if (numerics::energy(tx.ref[j]) == 0.0) continue;
    const auto amp = frontend::apply_pa(tx.wave.antennas[j], ibo, cfg.pa.rapp);
    const auto psd = frontend::psd_welch_linear(amp, seg, seg / 2, tx.wave.sample_rate_hz);
    if (acc.empty()) acc.assign(psd.value.size(), 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += psd.value[i];
  }
  return acc;
}

constexpr double kFarOffsetHz = 20e6;

void run_mask(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  const auto ibos = or_default(cfg.sweep.ibo_db, {cfg.pa.ibo_db});
  const auto params = ofdm_params(cfg);
  const std::size_t seg = params.fft_len();
  SideTable psd_table{"psd.csv", {"scheme", "ibo_db", "freq_hz", "psd_dbr"}, {}};
  SideTable mask_table{"mask.csv", {"freq_hz", "limit_dbr"}, {}};
  for (auto s : cfg.schemes) {
    for (double ibo : ibos) {
      announce(opts, fmt::format("mask {} ibo={}", to_string(s), ibo), cfg.trials);
      const auto slots = run_trials<std::vector<double>>(
          cfg.trials, opts, [&](std::size_t t) { return mask_trial(cfg, s, ibo, t); });
      frontend::Psd lin;
      lin.value.assign(seg, 0.0);
      for (const auto& sl : slots) {
        if (!sl) continue;
        for (std::size_t i = 0; i < seg; ++i) lin.value[i] += (*sl)[i];
      }
      const double fs = params.sample_rate_hz();
      for (std::size_t i = 0; i < seg; ++i) {
        lin.freq_hz.push_back((static_cast<double>(i) - static_cast<double>(seg / 2)) * fs /
                              static_cast<double>(seg));
      }
      const auto psd = frontend::normalize_psd_db(lin);
      const auto report = frontend::mask_compliance(psd, cfg.pa.mask);
      const std::size_t ok = successes(slots);
      auto margin = make_row(cfg, s, Metric::kMaskMarginDb, report.worst_oob_margin_db, ok);
      margin.ibo_db = ibo;
      res.records.push_back(margin);
      auto side = make_row(cfg, s, Metric::kSidebandDbr, frontend::sideband_dbr(psd, kFarOffsetHz), ok);
      side.ibo_db = ibo;
      res.records.push_back(side);
      for (std::size_t i = 0; i < seg; ++i) {
        psd_table.rows.push_back({std::string(to_string(s)), format_number(ibo),
                                  format_number(psd.freq_hz[i]), format_number(psd.value[i])});
      }
      if (mask_table.rows.empty()) {
        for (double f : psd.freq_hz) {
          mask_table.rows.push_back({format_number(f), format_number(cfg.pa.mask.limit_dbr(f / 1e6))});
        }
      }
    }
  }
  res.tables.push_back(std::move(psd_table));
  res.tables.push_back(std::move(mask_table));
}

// ---------------------------------------------------------------- victim suppression

struct VictimSums {
  double test = 0.0;
  double ref = 0.0;
};

double delta_i_db(const ScenarioConfig& cfg, const RunOptions& opts, std::size_t& ok) {
  announce(opts, fmt::format("delta_i lambda_v={}", cfg.weights.lambda_victim), cfg.trials);
  const auto slots = run_trials<VictimSums>(cfg.trials, opts, [&](std::size_t t) {
    const auto set = metrics::draw_channels(cfg, t);
    const auto j_test = metrics::select_antennas(Scheme::kBctas, set, cfg, t);
    const auto j_ref = selection::maxgain_select(set.legit_est);
    return VictimSums{metrics::victim_power(j_test, set.victim),
                      metrics::victim_power(j_ref, set.victim)};
  });
  VictimSums tot;
  for (const auto& sl : slots) {
    if (!sl) continue;
    tot.test += sl->test;
    tot.ref += sl->ref;
  }
  ok = successes(slots);
  return numerics::linear_to_db(tot.ref / tot.test);
}

std::vector<double> default_lambda_v() { return {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}; }

void run_pareto(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  for (double lv : or_default(cfg.sweep.lambda_v, default_lambda_v())) {
    ScenarioConfig c = cfg;
    c.weights.lambda_victim = lv;
    std::size_t ok = 0;
    const double di = delta_i_db(c, opts, ok);
    res.records.push_back(make_row(c, Scheme::kBctas, Metric::kDeltaIDb, di, ok));
    add_ber_rows(c, Scheme::kBctas, opts, res, false);
  }
}

void run_correlation(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  for (double rho : or_default(cfg.sweep.rho, {0.0, 0.3, 0.6, 0.9})) {
    ScenarioConfig c = cfg;
    c.channel.rho = rho;
    for (auto s : c.schemes) add_ber_rows(c, s, opts, res, false);
    if (has_scheme(c, Scheme::kBctas)) {
      std::size_t ok = 0;
      const double di = delta_i_db(c, opts, ok);
      res.records.push_back(make_row(c, Scheme::kBctas, Metric::kDeltaIDb, di, ok));
    }
  }
}

struct NotchTrial {
  std::vector<double> p_ref;
  std::vector<double> p_test;
  double fraction = 0.0;
};

void run_notch(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  ScenarioConfig ref_cfg = cfg;
  ref_cfg.weights.lambda_victim = 0.0;
  const double depth = numerics::db_to_linear(-cfg.notch_depth_db);
  const std::size_t n_c = cfg.dims.n_c;
  announce(opts, "notch", cfg.trials);
  const auto slots = run_trials<NotchTrial>(cfg.trials, opts, [&](std::size_t t) {
    const auto set = metrics::draw_channels(cfg, t);
    const auto j_test = metrics::select_antennas(Scheme::kBctas, set, cfg, t);
    const auto j_ref = metrics::select_antennas(Scheme::kBctas, set, ref_cfg, t);
    NotchTrial out;
    out.p_ref.resize(n_c);
    out.p_test.resize(n_c);
    std::size_t notches = 0;
    for (std::size_t k = 0; k < n_c; ++k) {
      out.p_ref[k] = set.victim.power(j_ref[k], k);
      out.p_test[k] = set.victim.power(j_test[k], k);
      notches += out.p_test[k] <= depth * out.p_ref[k];
    }
    out.fraction = static_cast<double>(notches) / static_cast<double>(n_c);
    return out;
  });
  std::vector<double> ref(n_c, 0.0), test(n_c, 0.0);
  double frac = 0.0;
  const std::size_t ok = successes(slots);
  if (ok == 0) throw CampaignError("notch: no successful trials");
  for (const auto& sl : slots) {
    if (!sl) continue;
    for (std::size_t k = 0; k < n_c; ++k) {
      ref[k] += sl->p_ref[k];
      test[k] += sl->p_test[k];
    }
    frac += sl->fraction;
  }
  double sum_ref = 0.0, sum_test = 0.0;
  SideTable profile{"notch_profile.csv", {"subcarrier", "victim_ref_db", "victim_bctas_db"}, {}};
  for (std::size_t k = 0; k < n_c; ++k) {
    sum_ref += ref[k];
    sum_test += test[k];
    profile.rows.push_back({std::to_string(k),
                            format_number(numerics::linear_to_db(ref[k] / static_cast<double>(ok))),
                            format_number(numerics::linear_to_db(test[k] / static_cast<double>(ok)))});
  }
  res.records.push_back(make_row(cfg, Scheme::kBctas, Metric::kDeltaIDb,
                                 numerics::linear_to_db(sum_ref / sum_test), ok));
  res.records.push_back(
      make_row(cfg, Scheme::kBctas, Metric::kNotchFraction, frac / static_cast<double>(ok), ok));
  res.tables.push_back(std::move(profile));
}

// ---------------------------------------------------------------- oracle

struct OracleTrial {
  double max_sum = 0.0;
  double min_sum = 0.0;
  double min_below_scale = 0.0;     // count of min <= sigma2 / n
  double penalty_sum = 0.0;         // legit gain on the antenna minimizing victim power
  std::vector<double> siso_below;   // per SNR
  std::vector<double> max_below;    // per SNR
  std::size_t samples = 0;
};

void run_oracle(const ScenarioConfig& cfg, const RunOptions& opts, CampaignResult& res) {
  SideTable table{"oracle.csv", {"name", "n", "snr_db", "theory", "monte_carlo", "rel_error"}, {}};
  const double gamma_th = numerics::db_to_linear(cfg.gamma_th_db);
  const std::size_t n_c = cfg.dims.n_c;
  auto add = [&](std::string name, int n, std::optional<double> snr, double theory, double mc) {
    table.rows.push_back({std::move(name), std::to_string(n), snr ? format_number(*snr) : "",
                          format_number(theory), format_number(mc),
                          format_number(theory != 0.0 ? std::abs(mc - theory) / std::abs(theory) : std::abs(mc))});
  };
  for (std::size_t n_sz : or_default<std::size_t>(cfg.sweep.n_t, {1, 2, 4, 8})) {
    const int n = static_cast<int>(n_sz);
    announce(opts, fmt::format("oracle n={}", n), cfg.trials);
    const auto slots = run_trials<OracleTrial>(cfg.trials, opts, [&](std::size_t t) {
      auto rng = metrics::trial_stream(cfg.seed, Purpose::kChannel, t, n_sz);
      OracleTrial o;
      o.siso_below.assign(cfg.snr_grid_db.size(), 0.0);
      o.max_below.assign(cfg.snr_grid_db.size(), 0.0);
      std::vector<double> legit(n_sz), victim(n_sz);
      for (std::size_t k = 0; k < n_c; ++k) {
        for (std::size_t j = 0; j < n_sz; ++j) {
          legit[j] = std::norm(numerics::gaussian_complex(rng, 1.0));
          victim[j] = std::norm(numerics::gaussian_complex(rng, 1.0));
        }
        const double mx = *std::max_element(legit.begin(), legit.end());
        const auto vmin = std::min_element(victim.begin(), victim.end());
        o.max_sum += mx;
        o.min_sum += *vmin;
        o.min_below_scale += *vmin <= 1.0 / n ? 1.0 : 0.0;
        o.penalty_sum += legit[static_cast<std::size_t>(vmin - victim.begin())];
        for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
          const double mean = numerics::db_to_linear(cfg.snr_grid_db[i]);
          o.siso_below[i] += legit[0] * mean < gamma_th ? 1.0 : 0.0;
          o.max_below[i] += mx * mean < gamma_th ? 1.0 : 0.0;
        }
        ++o.samples;
      }
      return o;
    });
    OracleTrial tot;
    tot.siso_below.assign(cfg.snr_grid_db.size(), 0.0);
    tot.max_below.assign(cfg.snr_grid_db.size(), 0.0);
    for (const auto& sl : slots) {
      if (!sl) continue;
      tot.max_sum += sl->max_sum;
      tot.min_sum += sl->min_sum;
      tot.min_below_scale += sl->min_below_scale;
      tot.penalty_sum += sl->penalty_sum;
      for (std::size_t i = 0; i < tot.siso_below.size(); ++i) {
        tot.siso_below[i] += sl->siso_below[i];
        tot.max_below[i] += sl->max_below[i];
      }
      tot.samples += sl->samples;
    }
    const double ns = static_cast<double>(tot.samples);
    if (ns == 0.0) throw CampaignError("oracle: no samples");
    add("expected_max_gain", n, std::nullopt, oracle::expected_max_gain(1.0, n), tot.max_sum / ns);
    add("selection_penalty", n, std::nullopt, oracle::selection_penalty(n),
        tot.penalty_sum / tot.max_sum);
    add("min_exp_mean", n, std::nullopt, 1.0 / n, tot.min_sum / ns);
    add("min_exp_cdf_at_mean", n, std::nullopt, oracle::min_exp_cdf(1.0 / n, 1.0, n),
        tot.min_below_scale / ns);
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
      const double snr = cfg.snr_grid_db[i];
      const double p_siso = oracle::siso_outage(gamma_th, numerics::db_to_linear(snr));
      if (n == 1) add("siso_outage", n, snr, p_siso, tot.siso_below[i] / ns);
      add("diversity_outage", n, snr, oracle::diversity_outage(p_siso, n), tot.max_below[i] / ns);
      ScenarioConfig c = cfg;
      c.dims.n_t = n_sz;
      c.channel.model = "flat";
      res.records.push_back(make_row(c, Scheme::kMaxGain, Metric::kOutage, tot.max_below[i] / ns,
                                     successes(slots), snr));
    }
  }
  res.tables.push_back(std::move(table));
}

}  // namespace

CampaignResult run_campaign(const ScenarioConfig& cfg, Experiment experiment,
                            const RunOptions& opts) {
  validate(cfg);
  CampaignResult res;
  switch (experiment) {
    case Experiment::kBer: run_ber(cfg, opts, res); break;
    case Experiment::kOutage: run_outage(cfg, opts, res); break;
    case Experiment::kBcf: run_bcf(cfg, opts, res); break;
    case Experiment::kPapr: run_papr(cfg, opts, res); break;
    case Experiment::kEvm: run_evm(cfg, opts, res); break;
    case Experiment::kMask: run_mask(cfg, opts, res); break;
    case Experiment::kPareto: run_pareto(cfg, opts, res); break;
    case Experiment::kCorrelation: run_correlation(cfg, opts, res); break;
    case Experiment::kNotch: run_notch(cfg, opts, res); break;
    case Experiment::kOracle: run_oracle(cfg, opts, res); break;
  }
  res.manifest.config_hash = config_hash(cfg);
  res.manifest.version = std::string(kVersion);
  res.manifest.timestamp = rfc3339_now();
  res.manifest.experiment = std::string(to_string(experiment));
  for (auto& r : res.records) r.config_hash = res.manifest.config_hash;
  return res;
}

}  // namespace bctas::harness
