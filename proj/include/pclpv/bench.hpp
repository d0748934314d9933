#pragma once

#include <json.hpp>

#include "pclpv/config.hpp"
#include "pclpv/simulate.hpp"
#include "pclpv/synthesis.hpp"

namespace pclpv {

struct ControllerSpec {
  std::string method;  // lti | lpv | pclpv | sclpv
  int order = 0;       // basis degree (pclpv/sclpv)
  int samples = 0;     // grid size (lpv)

  std::string label() const;
};

/// The standard comparison set: LTI; LPV 2/20/50/100 samples; pcLPV degrees
/// 3/4/5; scLPV degrees 5/9/12.
std::vector<ControllerSpec> default_benchmark_specs();

struct BenchRecord {
  ControllerSpec spec;
  std::string status;  // optimal | infeasible | unbounded | numerical-failure | error
  std::string error;
  int scalar_variables = 0;
  double solve_seconds = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double cost = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
  double sdp_residual = std::numeric_limits<double>::quiet_NaN();
  double decay_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> wc_abscissa;  // (delta, max Re eig)
  std::string gain_file, trajectory_file;

  nlohmann::json to_json() const;
};

struct RunManifest {
  std::string version;
  nlohmann::json config;
  std::vector<BenchRecord> records;

  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

SynthOptions options_from(const Config& cfg);

/// Dispatches on spec.method.
SynthResult synthesize_controller(const Config& cfg, const ControllerSpec& spec);

/// Decay residual evaluated against the measure matching the method's
/// guarantee: the deterministic plant for lti, the sample measure for lpv,
/// the collocation-node measure for sclpv, and the full assembly quadrature
/// for pclpv.
double certification_decay_residual(const Config& cfg, const ControllerSpec& spec,
                                    const Gain& gain);

/// Synthesize, certify, simulate; never throws (failures land in the record).
BenchRecord run_controller(const Config& cfg, const ControllerSpec& spec,
                           const std::string& out_dir);

RunManifest run_benchmark(const Config& cfg, const std::vector<ControllerSpec>& specs,
                          const std::string& out_dir, int threads);

std::string format_benchmark_csv(const RunManifest& manifest);
std::string format_benchmark_table(const RunManifest& manifest);

}  // namespace pclpv
