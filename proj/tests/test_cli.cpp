#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

#ifndef PCLPV_CLI_PATH
#define PCLPV_CLI_PATH "pclpv"
#endif
#ifndef PCLPV_SOURCE_DIR
#define PCLPV_SOURCE_DIR "."
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string out_file = "cli_test_output.txt";
  const std::string cmd =
      env + " " + std::string(PCLPV_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_file.c_str());
  return {WEXITSTATUS(status), ss.str()};
}

// Cheap variant of the reference config so CLI runs stay fast.
std::string quick_config() {
  std::ifstream in(std::string(PCLPV_SOURCE_DIR) + "/configs/reference.json");
  json doc;
  in >> doc;
  doc["synthesis"]["order"] = 2;
  doc["simulation"]["t_final"] = 2.0;
  const std::string path = "cli_quick_config.json";
  std::ofstream out(path);
  out << doc.dump(2);
  return path;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("synth writes gain, manifest, and SDP dump, exit 0") {
  const std::string cfg = quick_config();
  const auto r = run_cli("synth --config " + cfg +
                         " --method sclpv --order 3 --out cli_gain.json --dump-sdp cli_gain.dat-s");
  CHECK(r.exit_code == 0);
  CHECK(std::filesystem::exists("cli_gain.json"));
  CHECK(std::filesystem::exists("cli_gain.manifest.json"));
  CHECK(std::filesystem::exists("cli_gain.dat-s"));
  std::ifstream m("cli_gain.manifest.json");
  json manifest;
  m >> manifest;
  CHECK(manifest["records"][0]["status"] == "optimal");
  CHECK(manifest["config"]["synthesis"]["order"] == 2);
  std::remove("cli_gain.json");
  std::remove("cli_gain.manifest.json");
  std::remove("cli_gain.dat-s");
  std::remove(cfg.c_str());
}

TEST_CASE("simulate prints the cost and flags divergence for the 2-sample design") {
  const std::string cfg = quick_config();
  const auto synth = run_cli("synth --config " + cfg +
                             " --method lpv --samples 2 --out cli_lpv2.json");
  CHECK(synth.exit_code == 0);  // feasible even though the loop diverges
  const auto sim = run_cli("simulate --config " + std::string(PCLPV_SOURCE_DIR) +
                           "/configs/reference.json --gain cli_lpv2.json --out cli_lpv2.csv");
  CHECK(sim.exit_code == 0);
  CHECK(sim.output.find("J = ") != std::string::npos);
  CHECK(sim.output.find("states do not converge to zero") != std::string::npos);
  std::remove("cli_lpv2.json");
  std::remove("cli_lpv2.manifest.json");
  std::remove("cli_lpv2.csv");
  std::remove(cfg.c_str());
}

TEST_CASE("missing config key exits 1 naming the key") {
  std::ofstream bad("cli_bad_config.json");
  bad << R"({"model": {"mach": 2.5}})";
  bad.close();
  const auto r = run_cli("synth --config cli_bad_config.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("model.K_alpha") != std::string::npos);
  std::remove("cli_bad_config.json");
}

TEST_CASE("unstable model without control authority exits 2") {
  std::ifstream in(std::string(PCLPV_SOURCE_DIR) + "/configs/reference.json");
  json doc;
  in >> doc;
  doc["model"]["d_n"] = 0.0;  // no fin effectiveness: unstabilizable
  doc["model"]["d_m"] = 0.0;
  std::ofstream out("cli_zero_config.json");
  out << doc.dump();
  out.close();
  const auto r = run_cli("synth --config cli_zero_config.json --method lti");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("stabilizability") != std::string::npos);
  std::remove("cli_zero_config.json");
}

TEST_CASE("benchmark filter runs a single deterministic row") {
  const std::string cfg = quick_config();
  const auto r1 = run_cli("benchmark --config " + cfg + " --methods lti --out cli_bench1");
  const auto r2 = run_cli("benchmark --config " + cfg + " --methods lti --out cli_bench2");
  CHECK(r1.exit_code == 0);
  auto read_csv = [](const std::string& dir) {
    std::ifstream in(dir + "/benchmark.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  // identical up to the wall-clock solve_seconds column
  auto strip_seconds = [](std::string csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> fields;
      std::stringstream fs(line);
      std::string f;
      while (std::getline(fs, f, ',')) fields.push_back(f);
      if (fields.size() > 4) fields[4] = "-";
      for (size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
      out << "\n";
    }
    return out.str();
  };
  const std::string csv1 = read_csv("cli_bench1"), csv2 = read_csv("cli_bench2");
  CHECK(strip_seconds(csv1) == strip_seconds(csv2));
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 2);  // header + one row
  std::filesystem::remove_all("cli_bench1");
  std::filesystem::remove_all("cli_bench2");
  std::remove(cfg.c_str());
}

TEST_CASE("benchmark rerun from its own manifest reproduces the objective") {
  const std::string cfg = quick_config();
  const auto r1 = run_cli("benchmark --config " + cfg + " --methods sclpv-5 --out cli_bench3");
  CHECK(r1.exit_code == 0);
  const auto r2 =
      run_cli("benchmark --config cli_bench3/manifest.json --methods sclpv-5 --out cli_bench4");
  CHECK(r2.exit_code == 0);
  auto objective_of = [](const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    json m;
    in >> m;
    return m["records"][0]["objective"].get<double>();
  };
  CHECK(std::abs(objective_of("cli_bench3") - objective_of("cli_bench4")) <= 1e-9);
  std::filesystem::remove_all("cli_bench3");
  std::filesystem::remove_all("cli_bench4");
  std::remove(cfg.c_str());
}

TEST_CASE("validate passes on a fresh build and honors the suite filter") {
  const auto r = run_cli("validate --suite lemma1 --suite prop1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("lemma1") != std::string::npos);
  CHECK(r.output.find("orthogonality") == std::string::npos);
}

TEST_CASE("norm perturbation hook makes the orthogonality suite fail") {
  const auto r = run_cli("validate --suite orthogonality", "PCLPV_TEST_PERTURB_NORMS=1e-3");
  CHECK(r.exit_code != 0);
  CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_SUITE_END();
