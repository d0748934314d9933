#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "pclpv/plant.hpp"

namespace pclpv {

struct SynthesisConfig {
  std::string method = "pclpv";  // lti | lpv | pclpv | sclpv
  int order = 5;                 // basis degree for pclpv/sclpv
  int samples = 100;             // grid size for lpv
  int quadrature_order = 0;      // 0 -> default for the degree
  double epsilon_psd = 1e-6;
  double epsilon_stab = 1e-6;
  std::vector<double> wc_points;  // empty -> support endpoints
};

struct SimulationConfig {
  Eigen::VectorXd x0;
  double t_final = 20.0;
  double dt = 1e-3;
  std::vector<Eigen::VectorXd> x0_candidates;  // optional envelope sweep
};

struct Config {
  MissileConfig model;
  ParameterDistribution uncertainty = ParameterDistribution::uniform(-20.0, 20.0);
  CostWeights cost;
  SynthesisConfig synthesis;
  SimulationConfig simulation;
  std::uint64_t seed = 0;
  nlohmann::json snapshot;  // post-override document, embedded in manifests
};

/// Environment overrides: PCLPV_<SECTION>_<KEY> (case-insensitive key match,
/// e.g. PCLPV_SIMULATION_DT=0.002, PCLPV_MODEL_K_ALPHA=0.021, PCLPV_SEED=1),
/// values parsed as JSON.
nlohmann::json apply_env_overrides(nlohmann::json doc);

/// Throws ConfigError naming the first missing or malformed key.
Config parse_config(const nlohmann::json& doc);

/// Reads the file, applies environment overrides, parses.
Config load_config(const std::string& path);

}  // namespace pclpv
