// SPDX-License-Identifier: Apache-2.0

#include "bctas/csv.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace bctas::harness {

using metrics::MetricRecord;

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view s, std::string_view column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("csv: bad number \"{}\" in column {}", s, column));
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s, std::string_view column) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("csv: bad integer \"{}\" in column {}", s, column));
  }
  return v;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::optional<double> opt_double(std::string_view s, std::string_view column) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, column);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

std::string to_csv(const std::vector<MetricRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.scheme),
                       metrics::to_string(r.metric), opt(r.snr_db), format_number(r.value),
                       r.n_trials, r.seed, opt(r.lambda_t), opt(r.lambda_v), opt(r.ibo_db),
                       r.n_t ? std::to_string(*r.n_t) : std::string(), r.model_tag.value_or(""),
                       opt(r.sigma_e), opt(r.rho), r.kalman_mode.value_or(""));
  }
  return out;
}

std::vector<MetricRecord> parse_csv(std::string_view text) {
  std::vector<MetricRecord> out;
  bool header = true;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw std::invalid_argument("csv: unexpected header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 14) {
      throw std::invalid_argument(fmt::format("csv: line {} has {} fields, expected 14", line_no, f.size()));
    }
    MetricRecord r;
    r.scheme = scheme_from_string(f[0]);
    r.metric = metrics::metric_from_string(f[1]);
    r.snr_db = opt_double(f[2], "snr_db");
    r.value = parse_double(f[3], "value");
    r.n_trials = parse_uint(f[4], "n_trials");
    r.seed = parse_uint(f[5], "seed");
    r.lambda_t = opt_double(f[6], "lambda_t");
    r.lambda_v = opt_double(f[7], "lambda_v");
    r.ibo_db = opt_double(f[8], "ibo_db");
    if (!f[9].empty()) r.n_t = parse_uint(f[9], "n_t");
    if (!f[10].empty()) r.model_tag = std::string(f[10]);
    r.sigma_e = opt_double(f[11], "sigma_e");
    r.rho = opt_double(f[12], "rho");
    if (!f[13].empty()) r.kalman_mode = std::string(f[13]);
    out.push_back(std::move(r));
  }
  if (header) throw std::invalid_argument("csv: missing header");
  return out;
}

void emit_csv(const std::vector<MetricRecord>& records, const std::filesystem::path& path) {
  write_text(path, to_csv(records));
}

std::vector<MetricRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string to_csv(const SideTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string manifest_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["config_hash"] = m.config_hash;
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  j["experiment"] = m.experiment;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_campaign(const CampaignResult& result,
                                                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  written.push_back(out_dir / "results.csv");
  emit_csv(result.records, written.back());
  written.push_back(out_dir / "manifest.json");
  write_text(written.back(), manifest_json(result.manifest));
  for (const auto& t : result.tables) {
    written.push_back(out_dir / t.file);
    write_text(written.back(), to_csv(t));
  }
  return written;
}

}  // namespace bctas::harness
