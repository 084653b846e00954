// SPDX-License-Identifier: Apache-2.0

#include "bctas/config.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace bctas::harness {

using json = nlohmann::json;

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kBctas: return "bctas";
    case Scheme::kMaxGain: return "maxgain";
    case Scheme::kNbas: return "nbas";
    case Scheme::kRandom: return "random";
    case Scheme::kSiso: return "siso";
    case Scheme::kMmseMimo: return "mmse_mimo";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view s) {
  for (Scheme x : {Scheme::kBctas, Scheme::kMaxGain, Scheme::kNbas, Scheme::kRandom,
                   Scheme::kSiso, Scheme::kMmseMimo}) {
    if (to_string(x) == s) return x;
  }
  throw ConfigError(fmt::format("unknown scheme \"{}\"", s));
}

bool is_tas(Scheme s) { return s != Scheme::kMmseMimo; }

namespace {

// Wraps one JSON object; every key read is recorded so that leftovers can
// be reported as unknown.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("{}: must be an object", where()));
  }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  void number(std::string_view key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(fmt::format("{}: must be a number", key_path(key)));
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(fmt::format("{}: must be finite", key_path(key)));
    }
  }

  template <class T>
  void integer(std::string_view key, T& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(fmt::format("{}: must be a non-negative integer", key_path(key)));
      }
      out = static_cast<T>(v->get<std::uint64_t>());
    }
  }

  void boolean(std::string_view key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(fmt::format("{}: must be true or false", key_path(key)));
      out = v->get<bool>();
    }
  }

  void string(std::string_view key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(fmt::format("{}: must be a string", key_path(key)));
      out = v->get<std::string>();
    }
  }

  void numbers(std::string_view key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(fmt::format("{}: must be an array", key_path(key)));
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) {
          throw ConfigError(fmt::format("{}: entries must be numbers", key_path(key)));
        }
        out.push_back(e.get<double>());
      }
    }
  }

  void integers(std::string_view key, std::vector<std::size_t>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(fmt::format("{}: must be an array", key_path(key)));
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_unsigned()) {
          throw ConfigError(fmt::format("{}: entries must be non-negative integers", key_path(key)));
        }
        out.push_back(e.get<std::size_t>());
      }
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(fmt::format("{}: unknown key", key_path(it.key())));
      }
    }
  }

private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, std::string_view key, std::string_view constraint) {
  if (!ok) throw ConfigError(fmt::format("{}: {}", key, constraint));
}

void read_dims(Section& s, DimsConfig& d) {
  s.integer("n_t", d.n_t);
  s.integer("n_r", d.n_r);
  s.integer("n_c", d.n_c);
  s.integer("n_cp", d.n_cp);
  s.integer("oversample", d.oversample);
}

void read_channel(Section& s, ChannelConfig& c) {
  s.string("model", c.model);
  s.number("rms_delay_ns", c.rms_delay_ns);
  s.number("sample_period_ns", c.sample_period_ns);
  s.number("rho", c.rho);
  s.number("path_exponent", c.path_exponent);
  s.number("d_ref_m", c.d_ref_m);
  s.number("d_l_m", c.d_l_m);
  s.number("d_t_m", c.d_t_m);
  s.number("d_v_m", c.d_v_m);
}

void read_csi(Section& s, CsiConfig& c) {
  s.number("sigma_e", c.sigma_e);
  if (const json* k = s.find("kalman")) {
    Section ks(*k, s.key_path("kalman"));
    ks.boolean("enabled", c.kalman.enabled);
    ks.number("q", c.kalman.params.q);
    ks.number("r", c.kalman.params.r);
    std::string mode(selection::to_string(c.kalman.mode));
    ks.string("mode", mode);
    try {
      c.kalman.mode = selection::kalman_mode_from_string(mode);
    } catch (const std::invalid_argument&) {
      throw ConfigError(fmt::format("{}: must be \"legit\" or \"all\"", ks.key_path("mode")));
    }
    ks.finish();
  }
}

void read_weights(Section& s, selection::MofsWeights& w) {
  s.number("lambda_t", w.lambda_tag);
  s.number("lambda_v", w.lambda_victim);
  s.number("epsilon", w.epsilon);
  s.number("p_tx", w.tx_power);
}

void read_pa(Section& s, PaConfig& p) {
  s.boolean("enabled", p.enabled);
  s.number("gain", p.rapp.gain);
  s.number("a_sat", p.rapp.a_sat);
  s.number("p", p.rapp.p);
  s.number("ibo_db", p.ibo_db);
  s.number("transition_ns", p.transition_ns);
  s.number("occupied_bw_mhz", p.occupied_bw_mhz);
  if (const json* m = s.find("mask")) {
    const std::string key = s.key_path("mask");
    require(m->is_array() && !m->empty(), key, "must be a non-empty array of [offset_mhz, limit_dbr]");
    std::vector<frontend::MaskTable::Point> pts;
    for (const auto& e : *m) {
      require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(), key,
              "entries must be [offset_mhz, limit_dbr] number pairs");
      pts.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    try {
      p.mask = frontend::MaskTable(std::move(pts));
    } catch (const std::domain_error& ex) {
      throw ConfigError(fmt::format("{}: {}", key, ex.what()));
    }
  }
}

void read_sweep(Section& s, SweepConfig& w) {
  s.integers("n_t", w.n_t);
  s.numbers("lambda_t", w.lambda_t);
  s.numbers("lambda_v", w.lambda_v);
  s.numbers("rho", w.rho);
  s.numbers("ibo_db", w.ibo_db);
}

template <class Fn>
void subsection(Section& top, std::string_view key, Fn fn) {
  if (const json* v = top.find(key)) {
    Section s(*v, std::string(key));
    fn(s);
    s.finish();
  }
}

bool known_model(const std::string& m) {
  if (m == "flat" || m == "pdp") return true;
  return m.size() == 5 && m.rfind("tgn_", 0) == 0 && channel::tgn_rms_delay_spread(m[4]);
}

}  // namespace

channel::ChannelProfile channel_profile(const ScenarioConfig& cfg) {
  const auto& c = cfg.channel;
  channel::ChannelProfile p;
  if (c.model == "flat") {
    p.model = channel::FadingModel::kFlat;
  } else if (c.model == "pdp") {
    p.model = channel::FadingModel::kPdp;
    p.rms_delay_spread_s = c.rms_delay_ns * 1e-9;
  } else if (known_model(c.model)) {
    p.model = channel::FadingModel::kPdp;
    p.rms_delay_spread_s = *channel::tgn_rms_delay_spread(c.model[4]);
  } else {
    throw ConfigError(fmt::format("channel.model: unknown model \"{}\"", c.model));
  }
  p.sample_period_s = c.sample_period_ns * 1e-9;
  p.tx_correlation = c.rho;
  p.path_exponent = c.path_exponent;
  p.d_ref_m = c.d_ref_m;
  p.d_legit_m = c.d_l_m;
  p.d_tag_m = c.d_t_m;
  p.d_victim_m = c.d_v_m;
  return p;
}

void validate(const ScenarioConfig& cfg) {
  const auto& d = cfg.dims;
  require(d.n_t >= 1, "dims.n_t", "must be >= 1");
  require(d.n_r >= 1, "dims.n_r", "must be >= 1");
  require(d.n_c >= 1, "dims.n_c", "must be >= 1");
  require(d.n_cp < d.n_c, "dims.n_cp", "must be < dims.n_c");
  require(d.oversample >= 1, "dims.oversample", "must be >= 1");
  require(cfg.modulation == 16 || cfg.modulation == 64, "modulation", "must be 16 or 64");

  const auto& c = cfg.channel;
  require(known_model(c.model), "channel.model", "must be flat, pdp or tgn_a..tgn_f");
  require(c.rms_delay_ns >= 0.0, "channel.rms_delay_ns", "must be >= 0");
  require(c.sample_period_ns > 0.0, "channel.sample_period_ns", "must be > 0");
  require(c.rho >= 0.0 && c.rho < 1.0, "channel.rho", "must lie in [0, 1)");
  require(c.d_ref_m > 0.0, "channel.d_ref_m", "must be > 0");
  require(c.d_l_m > 0.0, "channel.d_l_m", "must be > 0");
  require(c.d_t_m > 0.0, "channel.d_t_m", "must be > 0");
  require(c.d_v_m > 0.0, "channel.d_v_m", "must be > 0");
  if (c.model != "flat") {
    const auto taps = channel::pdp_tap_powers(channel_profile(cfg).rms_delay_spread_s,
                                              c.sample_period_ns * 1e-9);
    require(taps.size() <= d.n_c, "channel.rms_delay_ns", "profile has more taps than dims.n_c");
  }

  require(cfg.csi.sigma_e >= 0.0 && cfg.csi.sigma_e < 1.0, "csi.sigma_e", "must lie in [0, 1)");
  require(cfg.csi.kalman.params.q >= 0.0, "csi.kalman.q", "must be >= 0");
  require(cfg.csi.kalman.params.r > 0.0, "csi.kalman.r", "must be > 0");

  const auto& w = cfg.weights;
  require(w.lambda_tag >= 0.0, "weights.lambda_t", "must be >= 0");
  require(w.lambda_victim >= 0.0, "weights.lambda_v", "must be >= 0");
  require(w.epsilon > 0.0, "weights.epsilon", "must be > 0");
  require(w.tx_power > 0.0, "weights.p_tx", "must be > 0");

  const auto& p = cfg.pa;
  require(p.rapp.gain > 0.0, "pa.gain", "must be > 0");
  require(p.rapp.a_sat > 0.0, "pa.a_sat", "must be > 0");
  require(p.rapp.p > 0.0, "pa.p", "must be > 0");
  require(p.transition_ns >= 0.0, "pa.transition_ns", "must be >= 0");
  require(p.occupied_bw_mhz > 0.0, "pa.occupied_bw_mhz", "must be > 0");
  const double fs = p.occupied_bw_mhz * 1e6 * static_cast<double>(d.oversample);
  require(std::round(p.transition_ns * 1e-9 * fs) <= static_cast<double>(d.n_cp * d.oversample),
          "pa.transition_ns", "transition window must fit in the cyclic prefix");

  require(!cfg.snr_grid_db.empty(), "snr_grid_db", "must not be empty");
  require(cfg.trials >= 1, "trials", "must be >= 1");
  require(!cfg.schemes.empty(), "schemes", "must not be empty");
  require(cfg.power_model.p_chain_mw >= 0.0, "power_model.p_chain_mw", "must be >= 0");
  require(cfg.power_model.p_sel_mw >= 0.0, "power_model.p_sel_mw", "must be >= 0");
  require(cfg.power_model.p_chain_mw + cfg.power_model.p_sel_mw > 0.0, "power_model",
          "total power must be > 0");
  require(cfg.tag.p_th >= 0.0, "tag.p_th", "must be >= 0");
  require(cfg.tag.rho_refl >= 0.0, "tag.rho_refl", "must be >= 0");
  require(cfg.tag.noise_var > 0.0, "tag.noise_var", "must be > 0");
  require(cfg.symbols_per_trial >= 1, "symbols_per_trial", "must be >= 1");
  require(cfg.ccdf_level > 0.0 && cfg.ccdf_level < 1.0, "ccdf_level", "must lie in (0, 1)");
  require(cfg.notch_depth_db >= 0.0, "notch_depth_db", "must be >= 0");

  for (auto n : cfg.sweep.n_t) require(n >= 1, "sweep.n_t", "entries must be >= 1");
  for (auto v : cfg.sweep.lambda_t) require(v >= 0.0, "sweep.lambda_t", "entries must be >= 0");
  for (auto v : cfg.sweep.lambda_v) require(v >= 0.0, "sweep.lambda_v", "entries must be >= 0");
  for (auto v : cfg.sweep.rho) require(v >= 0.0 && v < 1.0, "sweep.rho", "entries must lie in [0, 1)");
}

ScenarioConfig load_config_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config: malformed JSON: {}", e.what()));
  }
  ScenarioConfig cfg;
  Section top(j, "");
  subsection(top, "dims", [&](Section& s) { read_dims(s, cfg.dims); });
  top.integer("modulation", cfg.modulation);
  subsection(top, "channel", [&](Section& s) { read_channel(s, cfg.channel); });
  subsection(top, "csi", [&](Section& s) { read_csi(s, cfg.csi); });
  subsection(top, "weights", [&](Section& s) { read_weights(s, cfg.weights); });
  subsection(top, "pa", [&](Section& s) { read_pa(s, cfg.pa); });
  top.numbers("snr_grid_db", cfg.snr_grid_db);
  top.number("gamma_th_db", cfg.gamma_th_db);
  top.integer("trials", cfg.trials);
  top.integer("seed", cfg.seed);
  if (const json* s = top.find("schemes")) {
    require(s->is_array(), "schemes", "must be an array of scheme names");
    cfg.schemes.clear();
    for (const auto& e : *s) {
      require(e.is_string(), "schemes", "entries must be strings");
      try {
        cfg.schemes.push_back(scheme_from_string(e.get<std::string>()));
      } catch (const ConfigError& ex) {
        throw ConfigError(fmt::format("schemes: {}", ex.what()));
      }
    }
  }
  subsection(top, "power_model", [&](Section& s) {
    s.number("p_chain_mw", cfg.power_model.p_chain_mw);
    s.number("p_sel_mw", cfg.power_model.p_sel_mw);
  });
  subsection(top, "tag", [&](Section& s) {
    s.number("p_th", cfg.tag.p_th);
    s.number("rho_refl", cfg.tag.rho_refl);
    s.number("noise_var", cfg.tag.noise_var);
  });
  top.integer("symbols_per_trial", cfg.symbols_per_trial);
  top.number("ccdf_level", cfg.ccdf_level);
  top.number("notch_depth_db", cfg.notch_depth_db);
  subsection(top, "sweep", [&](Section& s) { read_sweep(s, cfg.sweep); });
  top.finish();
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

namespace {

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["dims"] = {{"n_t", cfg.dims.n_t}, {"n_r", cfg.dims.n_r}, {"n_c", cfg.dims.n_c},
               {"n_cp", cfg.dims.n_cp}, {"oversample", cfg.dims.oversample}};
  j["modulation"] = cfg.modulation;
  const auto& c = cfg.channel;
  j["channel"] = {{"model", c.model}, {"rms_delay_ns", c.rms_delay_ns},
                  {"sample_period_ns", c.sample_period_ns}, {"rho", c.rho},
                  {"path_exponent", c.path_exponent}, {"d_ref_m", c.d_ref_m},
                  {"d_l_m", c.d_l_m}, {"d_t_m", c.d_t_m}, {"d_v_m", c.d_v_m}};
  j["csi"] = {{"sigma_e", cfg.csi.sigma_e},
              {"kalman", {{"enabled", cfg.csi.kalman.enabled},
                          {"q", cfg.csi.kalman.params.q},
                          {"r", cfg.csi.kalman.params.r},
                          {"mode", std::string(selection::to_string(cfg.csi.kalman.mode))}}}};
  j["weights"] = {{"lambda_t", cfg.weights.lambda_tag}, {"lambda_v", cfg.weights.lambda_victim},
                  {"epsilon", cfg.weights.epsilon}, {"p_tx", cfg.weights.tx_power}};
  json mask = json::array();
  for (const auto& [f, l] : cfg.pa.mask.points()) mask.push_back({f, l});
  j["pa"] = {{"enabled", cfg.pa.enabled}, {"gain", cfg.pa.rapp.gain},
             {"a_sat", cfg.pa.rapp.a_sat}, {"p", cfg.pa.rapp.p}, {"ibo_db", cfg.pa.ibo_db},
             {"mask", mask}, {"transition_ns", cfg.pa.transition_ns},
             {"occupied_bw_mhz", cfg.pa.occupied_bw_mhz}};
  j["snr_grid_db"] = cfg.snr_grid_db;
  j["gamma_th_db"] = cfg.gamma_th_db;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  json schemes = json::array();
  for (auto s : cfg.schemes) schemes.push_back(std::string(to_string(s)));
  j["schemes"] = schemes;
  j["power_model"] = {{"p_chain_mw", cfg.power_model.p_chain_mw},
                      {"p_sel_mw", cfg.power_model.p_sel_mw}};
  j["tag"] = {{"p_th", cfg.tag.p_th}, {"rho_refl", cfg.tag.rho_refl},
              {"noise_var", cfg.tag.noise_var}};
  j["symbols_per_trial"] = cfg.symbols_per_trial;
  j["ccdf_level"] = cfg.ccdf_level;
  j["notch_depth_db"] = cfg.notch_depth_db;
  j["sweep"] = {{"n_t", cfg.sweep.n_t}, {"lambda_t", cfg.sweep.lambda_t},
                {"lambda_v", cfg.sweep.lambda_v}, {"rho", cfg.sweep.rho},
                {"ibo_db", cfg.sweep.ibo_db}};
  return j;
}

}  // namespace

std::string to_json_text(const ScenarioConfig& cfg, int indent) { return to_json(cfg).dump(indent); }

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("config_hash: SHA-256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

}  // namespace bctas::harness
