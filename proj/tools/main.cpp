#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "pclpv/bench.hpp"
#include "pclpv/validation.hpp"

namespace {

using namespace pclpv;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;

int status_exit_code(const SdpSolution::Status s) {
  switch (s) {
    case SdpSolution::Status::Optimal: return kExitOk;
    case SdpSolution::Status::Infeasible: return kExitInfeasible;
    default: return kExitNumerical;
  }
}

Config load_or_die(const std::string& path, std::uint64_t* seed_override) {
  std::ifstream probe(path);
  if (!probe) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  probe >> doc;
  // A manifest is accepted in place of a config: its embedded snapshot is
  // authoritative for reruns.
  if (doc.contains("records") && doc.contains("config")) doc = doc.at("config");
  Config cfg = parse_config(apply_env_overrides(std::move(doc)));
  if (seed_override) cfg.seed = *seed_override;
  return cfg;
}

int cmd_synth(const std::string& config_path, std::string method, int order, int samples,
              const std::string& out, const std::string& dump_sdp,
              std::optional<std::uint64_t> seed) {
  Config cfg = load_or_die(config_path, nullptr);
  if (seed) cfg.seed = *seed;
  ControllerSpec spec;
  spec.method = method.empty() ? cfg.synthesis.method : method;
  spec.order = order >= 0 ? order : cfg.synthesis.order;
  spec.samples = samples > 0 ? samples : cfg.synthesis.samples;

  SynthResult res = synthesize_controller(cfg, spec);
  if (!dump_sdp.empty()) {
    write_sdpa(res.problem, dump_sdp);
    std::printf("SDP written to %s\n", dump_sdp.c_str());
  }
  if (!res.ok()) {
    std::fprintf(stderr, "synthesis failed (%s): %s\n", to_string(res.solution.status),
                 res.failure.c_str());
    // a solved program whose gain fails the stabilizability postcondition is
    // an infeasible design, not a numerical breakdown
    return res.solution.status == SdpSolution::Status::Optimal
               ? kExitInfeasible
               : status_exit_code(res.solution.status);
  }
  write_gain_json(*res.gain, out);

  BenchRecord rec;
  rec.spec = spec;
  rec.status = "optimal";
  rec.scalar_variables = res.scalar_variables;
  rec.solve_seconds = res.solution.solve_seconds;
  rec.objective = res.objective;
  rec.sdp_residual = res.sdp_residual();
  rec.decay_residual = certification_decay_residual(cfg, spec, *res.gain);
  RunManifest manifest;
  manifest.version = kVersion;
  manifest.config = cfg.snapshot;
  manifest.records.push_back(rec);
  std::string manifest_path = out;
  if (manifest_path.size() > 5 && manifest_path.substr(manifest_path.size() - 5) == ".json")
    manifest_path.resize(manifest_path.size() - 5);
  manifest_path += ".manifest.json";
  manifest.write(manifest_path);

  std::printf("method=%s vars=%d objective=%.9f solve_seconds=%.3f sdp_residual=%.3e "
              "decay_residual=%.3e\n",
              spec.label().c_str(), res.scalar_variables, res.objective,
              res.solution.solve_seconds, rec.sdp_residual, rec.decay_residual);
  std::printf("gain written to %s\nmanifest written to %s\n", out.c_str(), manifest_path.c_str());
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& gain_path,
                 const std::string& out) {
  const Config cfg = load_or_die(config_path, nullptr);
  const Gain gain = read_gain_json(gain_path);
  if (gain_state_dim(gain) != 2 || gain_input_dim(gain) != 1) {
    std::fprintf(stderr, "gain/plant dimension mismatch: gain is %dx%d, plant needs 1x2\n",
                 gain_input_dim(gain), gain_state_dim(gain));
    return kExitConfig;
  }
  const SimResult sim = simulate_closed_loop(cfg.model, cfg.cost, gain, cfg.simulation.x0,
                                             cfg.simulation.t_final, cfg.simulation.dt);
  if (!out.empty()) write_trajectory_csv(sim, out);
  std::printf("J = %.6f%s\n", sim.J,
              sim.diverged() ? "  [diverged: states do not converge to zero]" : "");
  if (!out.empty()) std::printf("trajectory written to %s\n", out.c_str());
  return kExitOk;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_dir,
                  const std::string& methods, int threads, std::optional<std::uint64_t> seed) {
  Config cfg = load_or_die(config_path, nullptr);
  if (seed) cfg.seed = *seed;
  std::vector<ControllerSpec> specs = default_benchmark_specs();
  if (!methods.empty()) {
    std::vector<ControllerSpec> filtered;
    std::stringstream ss(methods);
    std::string tok;
    std::vector<std::string> keep;
    while (std::getline(ss, tok, ',')) keep.push_back(tok);
    for (const auto& s : specs)
      for (const auto& k : keep)
        if (s.method == k || s.label() == k) {
          filtered.push_back(s);
          break;
        }
    specs = filtered;
  }
  const RunManifest manifest = run_benchmark(cfg, specs, out_dir, threads);
  std::filesystem::create_directories(out_dir);
  manifest.write(out_dir + "/manifest.json");
  std::ofstream csv(out_dir + "/benchmark.csv");
  csv << format_benchmark_csv(manifest);
  std::ofstream txt(out_dir + "/benchmark.txt");
  const std::string table = format_benchmark_table(manifest);
  txt << table;
  std::fputs(table.c_str(), stdout);
  std::printf("outputs in %s\n", out_dir.c_str());
  return kExitOk;
}

int cmd_validate(const std::vector<std::string>& suites, std::uint64_t seed) {
  const auto results = run_validation_suites(suites, seed);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("[%s] %-14s worst residual %.3e %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.worst, r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-dependent LQR synthesis for LPV systems with a random scheduling "
               "parameter (Galerkin and collocation LMI methods, plus LTI and sampled-LPV "
               "baselines)"};
  app.require_subcommand(1);

  std::string config_path, out, gain_path, method, methods, dump_sdp;
  int order = -1, samples = 0, threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, 8);
  std::optional<std::uint64_t> seed;
  std::vector<std::string> suites;

  auto* synth = app.add_subcommand("synth", "synthesize a controller and write gain + manifest");
  synth->add_option("--config", config_path, "config JSON")->required();
  synth->add_option("--method", method, "lti | lpv | pclpv | sclpv (default from config)");
  synth->add_option("--order", order, "basis degree for pclpv/sclpv");
  synth->add_option("--samples", samples, "sample count for lpv");
  synth->add_option("--out", out, "gain output path")->default_val("gain.json");
  synth->add_option("--dump-sdp", dump_sdp, "write the assembled SDP in SDPA sparse format");
  synth->add_option("--seed", seed, "seed override");

  auto* sim = app.add_subcommand("simulate", "closed-loop nonlinear simulation of a gain file");
  sim->add_option("--config", config_path, "config JSON")->required();
  sim->add_option("--gain", gain_path, "gain JSON")->required();
  sim->add_option("--out", out, "trajectory CSV path");

  auto* bench = app.add_subcommand("benchmark", "run the full comparison table");
  bench->add_option("--config", config_path, "config JSON")->required();
  bench->add_option("--out", out, "output directory")->default_val("bench_out");
  bench->add_option("--methods", methods, "comma-separated method/label filter");
  bench->add_option("--threads", threads, "worker threads");
  bench->add_option("--seed", seed, "seed override");

  auto* val = app.add_subcommand("validate", "run the property suites");
  val->add_option("--suite", suites, "suite filter (repeatable)");
  val->add_option("--seed", seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed())
      return cmd_synth(config_path, method, order, samples, out, dump_sdp, seed);
    if (sim->parsed()) return cmd_simulate(config_path, gain_path, out);
    if (bench->parsed()) return cmd_benchmark(config_path, out, methods, threads, seed);
    if (val->parsed()) return cmd_validate(suites, seed.value_or(0));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
