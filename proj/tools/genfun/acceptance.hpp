#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace genfun::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;
inline constexpr std::uint64_t kAcceptanceSeed = 20240601;

CriterionResult run_criterion(int id, std::uint64_t seed = kAcceptanceSeed);

/// Runs the selected criterion (or all), printing one PASS/FAIL line each.
/// Returns true iff every criterion run passed.
bool run_acceptance(std::ostream& out, std::optional<int> only = {}, std::uint64_t seed = kAcceptanceSeed);

}  // namespace genfun::cli
