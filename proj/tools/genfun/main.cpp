#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "config.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Midpoint generating functions: experiments and acceptance checks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  std::string config_path;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "CSV output path (overrides the config)");
  run->add_option("--seed", seed, "Random seed (overrides the config)");
  run->add_option("--samples", samples, "Sample count (overrides the config)")->check(CLI::PositiveNumber);

  auto* accept = app.add_subcommand("accept", "Run the acceptance battery");
  std::optional<int> criterion;
  std::uint64_t accept_seed = genfun::cli::kAcceptanceSeed;
  accept->add_option("-c,--criterion", criterion, "Run a single criterion")
      ->check(CLI::Range(1, genfun::cli::kCriterionCount));
  accept->add_option("--seed", accept_seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = genfun::cli::load_config(config_path);
      if (output) cfg.output = *output;
      if (seed) cfg.seed = *seed;
      if (samples) cfg.samples = *samples;
      return genfun::cli::run_and_write(cfg, genfun::cli::thread_count_from_env());
    }
    return genfun::cli::run_acceptance(std::cout, criterion, accept_seed) ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
