#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genfun/hamiltonian.hpp"
#include "genfun/sphere.hpp"

namespace genfun::cli {

enum class SpaceKind { Affine, Sphere };

enum class Experiment { Flow, CheckSymplectic, Compose, MoyalVerify, SphereIdentify, Orbit };

std::string_view to_string(Experiment e) noexcept;

struct ExperimentParams {
  double epsilon = 0.01;
  int steps = 10000;
  std::optional<Vector> initial;
  double hbar = 1.0;
  double radius = 1.0;
  /// Overrides the primary metric's default threshold.
  std::optional<double> threshold;
};

struct ExperimentConfig {
  SpaceKind space = SpaceKind::Affine;
  int n = 1;
  std::vector<HamiltonianSpec> hamiltonians;
  std::vector<sphere::SphereHamiltonian> sphere_hamiltonians;
  SolverConfig solver;
  Experiment experiment = Experiment::CheckSymplectic;
  int samples = 10;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  ExperimentParams params;

  std::size_t hamiltonian_count() const {
    return space == SpaceKind::Affine ? hamiltonians.size() : sphere_hamiltonians.size();
  }
};

/// Throws Error(ConfigInvalid) with the offending field named in the message.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace genfun::cli
