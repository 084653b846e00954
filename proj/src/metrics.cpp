// SPDX-License-Identifier: Apache-2.0

#include "bctas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bctas/frontend.hpp"
#include "bctas/selection.hpp"
#include "bctas/waveform.hpp"

namespace bctas::metrics {

using harness::ScenarioConfig;

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kBer: return "ber";
    case Metric::kOutage: return "outage";
    case Metric::kBcfDb: return "bcf_db";
    case Metric::kPaprDbAtCcdf: return "papr_db_at_ccdf";
    case Metric::kEvmPct: return "evm_pct";
    case Metric::kDeltaIDb: return "delta_i_db";
    case Metric::kSdrDb: return "sdr_db";
    case Metric::kEtaH: return "eta_h";
    case Metric::kEe: return "ee";
    case Metric::kMaskMarginDb: return "mask_margin_db";
    case Metric::kSidebandDbr: return "sideband_dbr";
    case Metric::kNotchFraction: return "notch_fraction";
  }
  return "unknown";
}

Metric metric_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Metric::kNotchFraction); ++i) {
    const auto m = static_cast<Metric>(i);
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown metric name");
}

numerics::RngStream trial_stream(std::uint64_t seed, Purpose purpose, std::uint64_t trial,
                                 std::uint64_t sub) {
  return numerics::RngStream(
      seed, numerics::derive_stream_id({static_cast<std::uint64_t>(purpose), trial, sub}));
}

namespace {

channel::Dims dims_of(const ScenarioConfig& cfg) {
  return {cfg.dims.n_t, cfg.dims.n_r, cfg.dims.n_c};
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

waveform::Bits random_bits(std::size_t n, numerics::RngStream& rng) {
  waveform::Bits b(n);
  for (auto& v : b) v = rng.bit();
  return b;
}

std::size_t count_errors(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e += a[i] != b[i];
  return e;
}

}  // namespace

channel::ChannelSet draw_channels(const ScenarioConfig& cfg, std::uint64_t trial) {
  auto rng = trial_stream(cfg.seed, Purpose::kChannel, trial);
  auto set = channel::gen_channel_set(harness::channel_profile(cfg), dims_of(cfg), rng);
  if (cfg.csi.sigma_e > 0.0) {
    auto err = trial_stream(cfg.seed, Purpose::kCsi, trial);
    set = channel::corrupt_csi(std::move(set), cfg.csi.sigma_e, err);
  }
  return set;
}

SelectionMap select_antennas(Scheme scheme, const channel::ChannelSet& set,
                             const ScenarioConfig& cfg, std::uint64_t trial,
                             std::size_t* evaluations) {
  switch (scheme) {
    case Scheme::kBctas:
      return selection::bctas_select(set, cfg.weights, cfg.csi.kalman, evaluations);
    case Scheme::kMaxGain: return selection::maxgain_select(set.legit_est);
    case Scheme::kNbas: return selection::nbas_select(set.legit_est);
    case Scheme::kRandom: {
      auto rng = trial_stream(cfg.seed, Purpose::kSelect, trial);
      return selection::random_select(set.legit_est.n_sc(), set.legit_est.n_tx(), rng);
    }
    case Scheme::kSiso: return SelectionMap(set.legit_est.n_sc(), 0);
    case Scheme::kMmseMimo: break;
  }
  throw std::invalid_argument("select_antennas: mmse_mimo has no selection map");
}

std::vector<BerPoint> ber_trial(const ScenarioConfig& cfg, Scheme scheme,
                                std::span<const double> snr_grid_db, std::uint64_t trial) {
  const std::size_t n_t = cfg.dims.n_t;
  const std::size_t n_r = cfg.dims.n_r;
  const std::size_t n_c = cfg.dims.n_c;
  const std::size_t n_syms = cfg.symbols_per_trial;
  const unsigned m = cfg.modulation;
  const unsigned nb = waveform::bits_per_symbol(m);
  const bool mimo = scheme == Scheme::kMmseMimo;
  const std::size_t streams = mimo ? n_t : 1;

  const channel::ChannelSet set = draw_channels(cfg, trial);
  auto data_rng = trial_stream(cfg.seed, Purpose::kData, trial);
  std::vector<waveform::Bits> bits(streams);
  std::vector<CVector> x(streams);
  for (std::size_t s = 0; s < streams; ++s) {
    bits[s] = random_bits(n_syms * n_c * nb, data_rng);
    x[s] = waveform::qam_map(bits[s], m);
  }

  // Per-antenna transmitted frequency-domain samples, [j][s * n_c + k].
  SelectionMap map;
  std::vector<CVector> tx(n_t, CVector(n_syms * n_c, Complex{}));
  if (mimo) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    for (std::size_t j = 0; j < n_t; ++j) {
      for (std::size_t i = 0; i < tx[j].size(); ++i) tx[j][i] = x[j][i] * scale;
    }
  } else {
    map = select_antennas(scheme, set, cfg, trial);
    for (std::size_t s = 0; s < n_syms; ++s) {
      for (std::size_t k = 0; k < n_c; ++k) tx[map[k]][s * n_c + k] = x[0][s * n_c + k];
    }
  }

  if (cfg.pa.enabled) {
    const auto params = ofdm_params(cfg);
    std::vector<waveform::OfdmGrid> grids(n_t);
    for (std::size_t j = 0; j < n_t; ++j) {
      grids[j] = {params, m, n_syms, tx[j]};
      if (numerics::energy(tx[j]) == 0.0) continue;
      const SelectionMap single(n_c, 0);
      const auto w = waveform::ofdm_modulate(grids[j], single, 1);
      const CVector amp = frontend::apply_pa(w.antennas[0], cfg.pa.ibo_db, cfg.pa.rapp);
      tx[j] = waveform::ofdm_demodulate(amp, params, n_syms);
    }
  }

  const double path_gain = set.legit.mean_power();
  std::vector<BerPoint> out(snr_grid_db.size());
  CVector y(n_r);
  CVector rx_sym(n_syms * n_c * streams);
  for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
    const double noise_var = path_gain / numerics::db_to_linear(snr_grid_db[i]);
    auto noise_rng = trial_stream(cfg.seed, Purpose::kNoise, trial, i);
    std::vector<selection::MmseFilter> filters;
    if (mimo) {
      CVector h(n_r * n_t);
      const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
      filters.reserve(n_c);
      for (std::size_t k = 0; k < n_c; ++k) {
        for (std::size_t r = 0; r < n_r; ++r) {
          for (std::size_t j = 0; j < n_t; ++j) h[r * n_t + j] = set.legit.at(j, r, k) * scale;
        }
        filters.emplace_back(h, n_r, n_t, noise_var);
      }
    }
    for (std::size_t s = 0; s < n_syms; ++s) {
      for (std::size_t k = 0; k < n_c; ++k) {
        const std::size_t idx = s * n_c + k;
        for (std::size_t r = 0; r < n_r; ++r) {
          Complex acc = numerics::gaussian_complex(noise_rng, noise_var);
          for (std::size_t j = 0; j < n_t; ++j) acc += set.legit.at(j, r, k) * tx[j][idx];
          y[r] = acc;
        }
        if (mimo) {
          const CVector est = filters[k].apply(y);
          for (std::size_t j = 0; j < n_t; ++j) rx_sym[j * n_syms * n_c + idx] = est[j];
        } else {
          // Maximal-ratio combining with the true channel of the active antenna.
          Complex num{};
          double den = 0.0;
          for (std::size_t r = 0; r < n_r; ++r) {
            const Complex h = set.legit.at(map[k], r, k);
            num += std::conj(h) * y[r];
            den += std::norm(h);
          }
          rx_sym[idx] = den > 0.0 ? num / den : Complex{};
        }
      }
    }
    for (std::size_t st = 0; st < streams; ++st) {
      const std::span<const Complex> seg(rx_sym.data() + st * n_syms * n_c, n_syms * n_c);
      const auto decided = waveform::qam_demap(seg, m);
      out[i].errors += count_errors(decided, bits[st]);
      out[i].bits += decided.size();
    }
  }
  return out;
}

std::vector<MetricRecord> simulate_ber(const ScenarioConfig& cfg, Scheme scheme,
                                       std::span<const double> snr_grid_db,
                                       const harness::RunOptions& opts) {
  const std::size_t streams = scheme == Scheme::kMmseMimo ? cfg.dims.n_t : 1;
  const double bits_per_point = static_cast<double>(cfg.trials * cfg.symbols_per_trial *
                                                    cfg.dims.n_c * streams *
                                                    waveform::bits_per_symbol(cfg.modulation));
  if (bits_per_point < 1e5) {
    throw std::domain_error("simulate_ber: fewer than 1e5 bits per SNR point");
  }
  const std::vector<double> grid(snr_grid_db.begin(), snr_grid_db.end());
  const auto slots = harness::run_trials<std::vector<BerPoint>>(
      cfg.trials, opts, [&](std::size_t t) { return ber_trial(cfg, scheme, grid, t); });
  std::vector<BerPoint> total(grid.size());
  std::size_t ok = 0;
  for (const auto& s : slots) {
    if (!s) continue;
    ++ok;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      total[i].errors += (*s)[i].errors;
      total[i].bits += (*s)[i].bits;
    }
  }
  std::vector<MetricRecord> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    MetricRecord r;
    r.scheme = scheme;
    r.metric = Metric::kBer;
    r.snr_db = grid[i];
    r.value = total[i].bits ? static_cast<double>(total[i].errors) /
                                  static_cast<double>(total[i].bits)
                            : 0.0;
    r.n_trials = ok;
    r.seed = cfg.seed;
    out.push_back(r);
  }
  return out;
}

std::vector<double> sinr_samples(const ScenarioConfig& cfg, Scheme scheme, double snr_db,
                                 std::size_t n_trials, const harness::RunOptions& opts) {
  const auto slots = harness::run_trials<std::vector<double>>(n_trials, opts, [&](std::size_t t) {
    const auto set = draw_channels(cfg, t);
    const double noise_var = set.legit.mean_power() / numerics::db_to_linear(snr_db);
    const std::size_t n_c = cfg.dims.n_c;
    std::vector<double> g;
    if (scheme == Scheme::kMmseMimo) {
      const std::size_t n_t = cfg.dims.n_t, n_r = cfg.dims.n_r;
      const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
      CVector h(n_r * n_t);
      for (std::size_t k = 0; k < n_c; ++k) {
        for (std::size_t r = 0; r < n_r; ++r) {
          for (std::size_t j = 0; j < n_t; ++j) h[r * n_t + j] = set.legit.at(j, r, k) * scale;
        }
        const selection::MmseFilter f(h, n_r, n_t, noise_var);
        g.insert(g.end(), f.sinr().begin(), f.sinr().end());
      }
    } else {
      const auto map = select_antennas(scheme, set, cfg, t);
      g.resize(n_c);
      for (std::size_t k = 0; k < n_c; ++k) {
        g[k] = cfg.weights.tx_power * set.legit.power(map[k], k) / noise_var;
      }
    }
    return g;
  });
  std::vector<double> out;
  for (const auto& s : slots) {
    if (s) out.insert(out.end(), s->begin(), s->end());
  }
  return out;
}

double outage_probability(std::span<const double> samples, double gamma_th_db) {
  if (samples.empty()) throw std::domain_error("outage_probability: no samples");
  const double th = numerics::db_to_linear(gamma_th_db);
  const auto below = std::count_if(samples.begin(), samples.end(), [&](double g) { return g < th; });
  return static_cast<double>(below) / static_cast<double>(samples.size());
}

CVector tag_time_signal(const SelectionMap& map, const channel::ChannelTensor& tag,
                        std::span<const Complex> x, std::size_t oversample) {
  const std::size_t n_c = tag.n_sc();
  if (map.size() != n_c || x.size() != n_c) {
    throw std::domain_error("tag_time_signal: shape mismatch");
  }
  CVector spec(n_c);
  for (std::size_t k = 0; k < n_c; ++k) {
    if (map[k] >= tag.n_tx()) throw std::domain_error("tag_time_signal: antenna out of range");
    spec[k] = tag.at(map[k], 0, k) * x[k];
  }
  CVector y = waveform::ofdm_symbol(spec, oversample);
  const double s = std::sqrt(static_cast<double>(oversample));
  for (auto& v : y) v *= s;
  return y;
}

double bcf(std::span<const Complex> y) {
  if (y.empty()) throw std::domain_error("bcf: empty signal");
  double peak = 0.0;
  for (const auto& v : y) peak = std::max(peak, std::norm(v));
  const double mean = numerics::mean_power(y);
  if (!(mean > 0.0)) throw std::domain_error("bcf: zero-energy symbol");
  return peak / mean;
}

std::vector<double> bcf_batch(const SelectionMap& map, const channel::ChannelTensor& tag,
                              std::span<const Complex> x_batch, std::size_t oversample) {
  const std::size_t n_c = tag.n_sc();
  if (n_c == 0 || x_batch.size() % n_c != 0) throw std::domain_error("bcf_batch: shape mismatch");
  std::vector<double> out;
  for (std::size_t s = 0; s < x_batch.size() / n_c; ++s) {
    out.push_back(bcf(tag_time_signal(map, tag, x_batch.subspan(s * n_c, n_c), oversample)));
  }
  return out;
}

double sdr_db(double p_saw, double noise_var, double p_b) {
  if (p_saw < 0.0 || noise_var < 0.0 || p_b < 0.0) {
    throw std::domain_error("sdr_db: powers must be >= 0");
  }
  const double den = noise_var + p_b;
  if (!(den > 0.0)) throw std::domain_error("sdr_db: zero denominator");
  return numerics::linear_to_db(p_saw / den);
}

double harvesting_efficiency(std::span<const double> incident_powers, double p_th) {
  if (incident_powers.empty()) throw std::domain_error("harvesting_efficiency: no samples");
  const auto hits = std::count_if(incident_powers.begin(), incident_powers.end(),
                                  [&](double p) { return p >= p_th; });
  return static_cast<double>(hits) / static_cast<double>(incident_powers.size());
}

double victim_power(const SelectionMap& map, const channel::ChannelTensor& victim) {
  if (map.size() != victim.n_sc() || map.empty()) {
    throw std::domain_error("victim_power: shape mismatch");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < map.size(); ++k) sum += victim.power(map[k], k);
  return sum / static_cast<double>(map.size());
}

double interference_suppression(const SelectionMap& test, const SelectionMap& ref,
                                const channel::ChannelTensor& victim) {
  return numerics::linear_to_db(victim_power(ref, victim) / victim_power(test, victim));
}

double energy_efficiency(double spectral_eff, std::size_t n_chains, const PowerModel& pm) {
  const double p = static_cast<double>(n_chains) * pm.p_chain_mw + pm.p_sel_mw;
  if (!(p > 0.0)) throw std::domain_error("energy_efficiency: total power must be positive");
  return spectral_eff / p;
}

}  // namespace bctas::metrics
