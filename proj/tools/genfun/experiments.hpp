#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "report.hpp"

namespace genfun::cli {

struct RunResult {
  std::vector<ReportRow> rows;
  nlohmann::json summary;
  bool pass = false;
};

/// Runs the configured experiment. Per-sample failures become "failed:<tag>"
/// rows; rows are ordered by sample index whatever the thread count.
RunResult run_experiment(const ExperimentConfig& cfg, unsigned threads);

/// GENFUN_THREADS if set to a positive integer, otherwise the hardware concurrency.
unsigned thread_count_from_env();

/// Summary path next to the CSV: "<stem>.summary.json".
std::filesystem::path summary_path(const std::filesystem::path& csv);

/// Runs and writes CSV + JSON summary. Returns 0 if every threshold passes, 2 otherwise.
int run_and_write(const ExperimentConfig& cfg, unsigned threads);

}  // namespace genfun::cli
