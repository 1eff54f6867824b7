#include "config.hpp"

#include <fstream>

namespace genfun::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, "field '" + field + "': " + why);
}

double get_number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

int get_int(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "expected an integer");
  return j.get<int>();
}

Experiment parse_experiment(const std::string& name) {
  if (name == "flow") return Experiment::Flow;
  if (name == "check-symplectic") return Experiment::CheckSymplectic;
  if (name == "compose") return Experiment::Compose;
  if (name == "moyal-verify") return Experiment::MoyalVerify;
  if (name == "sphere-identify") return Experiment::SphereIdentify;
  if (name == "orbit") return Experiment::Orbit;
  bad("experiment", "unknown experiment '" + name + "'");
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::Flow: return "flow";
    case Experiment::CheckSymplectic: return "check-symplectic";
    case Experiment::Compose: return "compose";
    case Experiment::MoyalVerify: return "moyal-verify";
    case Experiment::SphereIdentify: return "sphere-identify";
    case Experiment::Orbit: return "orbit";
  }
  return "unknown";
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) bad("<root>", "expected a JSON object");
  ExperimentConfig cfg;

  if (!j.contains("experiment") || !j.at("experiment").is_string()) bad("experiment", "missing or not a string");
  cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());

  if (!j.contains("space") || !j.at("space").is_object()) bad("space", "missing or not an object");
  const auto& space = j.at("space");
  if (!space.contains("type") || !space.at("type").is_string()) bad("space.type", "missing or not a string");
  const auto kind = space.at("type").get<std::string>();
  if (kind == "affine") {
    cfg.space = SpaceKind::Affine;
    if (!space.contains("n")) bad("space.n", "missing");
    cfg.n = get_int(space.at("n"), "space.n");
    if (cfg.n < 1) bad("space.n", "must be >= 1");
  } else if (kind == "sphere") {
    cfg.space = SpaceKind::Sphere;
  } else {
    bad("space.type", "expected 'affine' or 'sphere'");
  }

  if (!j.contains("hamiltonians") || !j.at("hamiltonians").is_array()) bad("hamiltonians", "missing or not an array");
  std::size_t index = 0;
  for (const auto& h : j.at("hamiltonians")) {
    const std::string field = "hamiltonians[" + std::to_string(index++) + "]";
    try {
      if (cfg.space == SpaceKind::Affine) {
        auto spec = hamiltonian_from_json(h, 2 * cfg.n);
        if (spec.dim() != 2 * cfg.n) bad(field, "dimension differs from 2 * space.n");
        cfg.hamiltonians.push_back(std::move(spec));
      } else {
        cfg.sphere_hamiltonians.push_back(sphere::sphere_hamiltonian_from_json(h));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConfigInvalid) throw;
      bad(field, e.what());
    }
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (!s.is_object()) bad("solver", "expected an object");
    if (s.contains("tol")) cfg.solver.tol = get_number(s.at("tol"), "solver.tol");
    if (s.contains("max_iter")) cfg.solver.max_iter = get_int(s.at("max_iter"), "solver.max_iter");
    if (s.contains("damping")) cfg.solver.damping = get_number(s.at("damping"), "solver.damping");
    if (s.contains("fd_step")) cfg.solver.fd_step = get_number(s.at("fd_step"), "solver.fd_step");
    try {
      cfg.solver.validate();
    } catch (const Error& e) {
      bad("solver", e.what());
    }
  }

  if (j.contains("samples")) {
    cfg.samples = get_int(j.at("samples"), "samples");
    if (cfg.samples < 1) bad("samples", "must be >= 1");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) bad("seed", "expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) bad("output", "expected a string");
    cfg.output = j.at("output").get<std::string>();
  }

  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (!p.is_object()) bad("params", "expected an object");
    if (p.contains("epsilon")) cfg.params.epsilon = get_number(p.at("epsilon"), "params.epsilon");
    if (p.contains("steps")) {
      cfg.params.steps = get_int(p.at("steps"), "params.steps");
      if (cfg.params.steps < 1) bad("params.steps", "must be >= 1");
    }
    if (p.contains("hbar")) {
      cfg.params.hbar = get_number(p.at("hbar"), "params.hbar");
      if (!(cfg.params.hbar > 0.0)) bad("params.hbar", "must be > 0");
    }
    if (p.contains("radius")) {
      cfg.params.radius = get_number(p.at("radius"), "params.radius");
      if (!(cfg.params.radius > 0.0)) bad("params.radius", "must be > 0");
    }
    if (p.contains("threshold")) cfg.params.threshold = get_number(p.at("threshold"), "params.threshold");
    if (p.contains("initial")) {
      const auto& init = p.at("initial");
      if (!init.is_array()) bad("params.initial", "expected an array");
      Vector v(static_cast<Eigen::Index>(init.size()));
      for (std::size_t i = 0; i < init.size(); ++i) v[static_cast<Eigen::Index>(i)] = get_number(init[i], "params.initial");
      cfg.params.initial = std::move(v);
    }
  }

  // Per-experiment requirements.
  const auto need = [&](std::size_t count, const char* why) {
    if (cfg.hamiltonian_count() < count) bad("hamiltonians", why);
  };
  switch (cfg.experiment) {
    case Experiment::Flow:
    case Experiment::CheckSymplectic: need(1, "experiment needs one Hamiltonian"); break;
    case Experiment::Compose: need(2, "compose needs two Hamiltonians (applied in order)"); break;
    case Experiment::MoyalVerify:
      if (cfg.space != SpaceKind::Affine) bad("space.type", "moyal-verify runs on the affine space");
      need(2, "moyal-verify needs two quadratic Hamiltonians");
      for (const auto& h : cfg.hamiltonians) {
        if (!h.is_quadratic()) bad("hamiltonians", "moyal-verify needs quadratic Hamiltonians");
      }
      break;
    case Experiment::SphereIdentify:
      if (cfg.space != SpaceKind::Sphere) bad("space.type", "sphere-identify runs on the sphere");
      break;
    case Experiment::Orbit:
      if (cfg.space != SpaceKind::Affine) bad("space.type", "orbit runs on the affine space");
      need(1, "orbit needs one Hamiltonian");
      if (cfg.params.initial && cfg.params.initial->size() != 2 * cfg.n)
        bad("params.initial", "dimension differs from 2 * space.n");
      break;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace genfun::cli
