#include "pclpv/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace pclpv {

std::string ControllerSpec::label() const {
  if (method == "lti") return "lti";
  if (method == "lpv") return "lpv-" + std::to_string(samples);
  return method + "-" + std::to_string(order);
}

std::vector<ControllerSpec> default_benchmark_specs() {
  std::vector<ControllerSpec> specs;
  specs.push_back({"lti", 0, 0});
  for (int s : {2, 20, 50, 100}) specs.push_back({"lpv", 0, s});
  for (int n : {3, 4, 5}) specs.push_back({"pclpv", n, 0});
  for (int n : {5, 9, 12}) specs.push_back({"sclpv", n, 0});
  return specs;
}

SynthOptions options_from(const Config& cfg) {
  SynthOptions o;
  o.quadrature_order = cfg.synthesis.quadrature_order;
  o.epsilon_psd = cfg.synthesis.epsilon_psd;
  o.epsilon_stab = cfg.synthesis.epsilon_stab;
  o.wc_points = cfg.synthesis.wc_points;
  return o;
}

SynthResult synthesize_controller(const Config& cfg, const ControllerSpec& spec) {
  const UncertainLinearSystem sys = missile_quasi_lpv(cfg.model);
  const SynthOptions options = options_from(cfg);
  if (spec.method == "lti") {
    const auto [a0, b0] = linearize_origin(cfg.model);
    return synth_lti(a0, b0, cfg.cost, options);
  }
  if (spec.method == "lpv") {
    return synth_lpv_sampled(
        sys, cfg.cost, uniform_samples(sys.distribution.lo(), sys.distribution.hi(), spec.samples),
        options);
  }
  if (spec.method == "pclpv")
    return synth_pclpv(sys, cfg.cost, OrthoBasis(sys.distribution, spec.order), options);
  if (spec.method == "sclpv")
    return synth_sclpv(sys, cfg.cost, LagrangeBasis(OrthoBasis(sys.distribution, spec.order)),
                       options);
  throw ConfigError("unknown synthesis method: " + spec.method);
}

double certification_decay_residual(const Config& cfg, const ControllerSpec& spec,
                                    const Gain& gain) {
  const UncertainLinearSystem sys = missile_quasi_lpv(cfg.model);
  if (spec.method == "lti") {
    const auto [a0, b0] = linearize_origin(cfg.model);
    UncertainLinearSystem fixed = sys;
    fixed.A = [a0](double) { return a0; };
    fixed.B = [b0](double) { return b0; };
    return expected_decay_residual(gain, fixed, cfg.cost.Q, cfg.cost.R,
                                   OrthoBasis(sys.distribution, 0),
                                   gauss_rule(sys.distribution, 2));
  }
  if (spec.method == "lpv") {
    const std::vector<double> samples =
        uniform_samples(sys.distribution.lo(), sys.distribution.hi(), spec.samples);
    QuadratureRule rule;
    rule.nodes = Eigen::Map<const Eigen::VectorXd>(samples.data(), samples.size());
    rule.weights = Eigen::VectorXd::Constant(samples.size(), 1.0 / samples.size());
    return expected_decay_residual(gain, sys, cfg.cost.Q, cfg.cost.R,
                                   OrthoBasis(sys.distribution, 0), rule);
  }
  if (spec.method == "sclpv") {
    const auto& g = std::get<ScGain>(gain);
    QuadratureRule rule{g.lagrange.nodes(), g.lagrange.node_expectations()};
    return expected_decay_residual(gain, sys, cfg.cost.Q, cfg.cost.R,
                                   OrthoBasis(sys.distribution, g.lagrange.degree()), rule);
  }
  const OrthoBasis basis(sys.distribution, spec.order);
  const int order = cfg.synthesis.quadrature_order > 0 ? cfg.synthesis.quadrature_order
                                                       : default_quadrature_order(spec.order);
  return expected_decay_residual(gain, sys, cfg.cost.Q, cfg.cost.R, basis,
                                 split_gauss_rule(sys.distribution, order));
}

BenchRecord run_controller(const Config& cfg, const ControllerSpec& spec,
                           const std::string& out_dir) {
  BenchRecord rec;
  rec.spec = spec;
  try {
    SynthResult res = synthesize_controller(cfg, spec);
    rec.scalar_variables = res.scalar_variables;
    rec.solve_seconds = res.solution.solve_seconds;
    rec.status = res.ok() ? "optimal" : to_string(res.solution.status);
    if (!res.ok()) {
      rec.error = res.failure;
      return rec;
    }
    rec.objective = res.objective;
    rec.sdp_residual = res.sdp_residual();
    rec.decay_residual = certification_decay_residual(cfg, spec, *res.gain);

    const UncertainLinearSystem sys = missile_quasi_lpv(cfg.model);
    std::vector<double> wc = cfg.synthesis.wc_points;
    if (wc.empty()) wc = {sys.distribution.lo(), sys.distribution.hi()};
    for (double p : wc) {
      const Eigen::MatrixXd acl = sys.A(p) + sys.B(p) * eval_gain(*res.gain, p);
      rec.wc_abscissa.emplace_back(p, spectral_abscissa(acl));
    }

    const SimResult sim = simulate_closed_loop(cfg.model, cfg.cost, *res.gain,
                                               cfg.simulation.x0, cfg.simulation.t_final,
                                               cfg.simulation.dt);
    rec.cost = sim.J;
    rec.diverged = sim.diverged();

    if (!out_dir.empty()) {
      rec.gain_file = out_dir + "/gain_" + spec.label() + ".json";
      rec.trajectory_file = out_dir + "/trajectory_" + spec.label() + ".csv";
      write_gain_json(*res.gain, rec.gain_file);
      write_trajectory_csv(sim, rec.trajectory_file);
    }
  } catch (const std::exception& e) {
    rec.status = "error";
    rec.error = e.what();
  }
  return rec;
}

RunManifest run_benchmark(const Config& cfg, const std::vector<ControllerSpec>& specs,
                          const std::string& out_dir, int threads) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  RunManifest manifest;
  manifest.version = kVersion;
  manifest.config = cfg.snapshot;
  manifest.records.resize(specs.size());

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      manifest.records[i] = run_controller(cfg, specs[i], out_dir);
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(specs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return manifest;
}

nlohmann::json BenchRecord::to_json() const {
  nlohmann::json j;
  j["method"] = spec.method;
  j["order"] = spec.order;
  j["samples"] = spec.samples;
  j["label"] = spec.label();
  j["status"] = status;
  if (!error.empty()) j["error"] = error;
  j["scalar_variables"] = scalar_variables;
  j["solve_seconds"] = solve_seconds;
  if (std::isfinite(objective)) j["objective"] = objective;
  if (std::isfinite(cost)) j["cost_to_go"] = cost;
  j["diverged"] = diverged;
  if (std::isfinite(sdp_residual)) j["sdp_residual"] = sdp_residual;
  if (std::isfinite(decay_residual)) j["decay_residual"] = decay_residual;
  nlohmann::json wc = nlohmann::json::array();
  for (const auto& [p, a] : wc_abscissa) wc.push_back({{"delta", p}, {"abscissa", a}});
  j["worst_case"] = wc;
  if (!gain_file.empty()) j["gain_file"] = gain_file;
  if (!trajectory_file.empty()) j["trajectory_file"] = trajectory_file;
  return j;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "pclpv";
  j["version"] = version;
  j["config"] = config;
  j["records"] = nlohmann::json::array();
  for (const auto& r : records) j["records"].push_back(r.to_json());
  return j;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("manifest write: cannot open " + path);
  out << to_json().dump(2) << "\n";
}

std::string format_benchmark_csv(const RunManifest& manifest) {
  std::ostringstream out;
  out << "method,order_or_samples,status,sdp_variables,solve_seconds,objective,cost_to_go,"
         "diverged,sdp_residual,decay_residual\n";
  char buf[512];
  for (const auto& r : manifest.records) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%s,%d,%.6g,%.12g,%.12g,%d,%.6g,%.6g\n",
                  r.spec.method.c_str(), r.spec.method == "lpv" ? r.spec.samples : r.spec.order,
                  r.status.c_str(), r.scalar_variables, r.solve_seconds, r.objective, r.cost,
                  r.diverged ? 1 : 0, r.sdp_residual, r.decay_residual);
    out << buf;
  }
  return out.str();
}

std::string format_benchmark_table(const RunManifest& manifest) {
  std::ostringstream out;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-12s %-10s %8s %12s %14s %14s %s\n", "controller", "status",
                "vars", "solve [s]", "objective", "cost-to-go", "note");
  out << buf;
  out << std::string(86, '-') << "\n";
  for (const auto& r : manifest.records) {
    std::string note;
    if (r.diverged) note = "states do not converge to zero";
    if (!r.error.empty()) note = r.error;
    std::snprintf(buf, sizeof(buf), "%-12s %-10s %8d %12.4f %14.6f %14.4f %s\n",
                  r.spec.label().c_str(), r.status.c_str(), r.scalar_variables, r.solve_seconds,
                  r.objective, r.cost, note.c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace pclpv
