// SPDX-License-Identifier: Apache-2.0
//
// bctas_sim <experiment> --config scenario.json --out results/

#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>
#include <optional>

#include "bctas/campaign.hpp"
#include "bctas/csv.hpp"

namespace {

using namespace bctas::harness;

int run(const std::string& name, const std::string& config_path, const std::string& out_dir,
        std::optional<std::size_t> trials, std::optional<std::uint64_t> seed,
        unsigned parallelism, bool quiet) {
  auto cfg = load_config_file(config_path);
  if (trials) cfg.trials = *trials;
  if (seed) cfg.seed = *seed;
  validate(cfg);
  StatusChannel status([](std::string_view label, std::size_t done, std::size_t total) {
    std::cerr << fmt::format("[{}] {}/{}\n", label, done, total);
  });
  RunOptions opts;
  opts.parallelism = parallelism;
  opts.status = quiet ? nullptr : &status;
  const auto result = run_campaign(cfg, experiment_from_string(name), opts);
  for (const auto& p : write_campaign(result, out_dir)) std::cout << p.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level Monte Carlo simulator for backscatter-aware transmit antenna selection"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "results";
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned parallelism = 1;
  bool quiet = false;

  std::vector<std::string> names;
  for (auto e : all_experiments()) names.emplace_back(to_string(e));

  std::string chosen;
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name, fmt::format("run the {} experiment", name));
    sub->add_option("-c,--config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "output directory");
    sub->add_option("--trials", trials, "override the trial count");
    sub->add_option("--seed", seed, "override the master seed");
    sub->add_option("-j,--parallelism", parallelism, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("-q,--quiet", quiet, "no progress on stderr");
    sub->callback([&chosen, name] { chosen = name; });
  }

  auto* val = app.add_subcommand("validate", "check a scenario file and print the resolved config");
  std::string validate_path;
  val->add_option("config", validate_path, "scenario JSON")->required()->check(CLI::ExistingFile);

  auto* ver = app.add_subcommand("version", "print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ver->parsed()) {
      std::cout << kVersion << '\n';
      return 0;
    }
    if (val->parsed()) {
      const auto cfg = load_config_file(validate_path);
      std::cout << to_json_text(cfg) << '\n' << "config_hash " << config_hash(cfg) << '\n';
      return 0;
    }
    return run(chosen, config_path, out_dir, trials, seed, parallelism, quiet);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
