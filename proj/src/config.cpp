#include "pclpv/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace pclpv {

namespace {

using nlohmann::json;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

const json& require(const json& doc, const std::string& section, const std::string& key) {
  if (!doc.contains(section))
    throw ConfigError("missing config key: " + section);
  const json& sec = doc.at(section);
  if (!sec.contains(key)) throw ConfigError("missing config key: " + section + "." + key);
  return sec.at(key);
}

double require_number(const json& doc, const std::string& section, const std::string& key) {
  const json& v = require(doc, section, key);
  if (!v.is_number()) throw ConfigError("config key " + section + "." + key + " must be a number");
  return v.get<double>();
}

Eigen::MatrixXd parse_matrix_or_scalar(const json& v, const std::string& where) {
  if (v.is_number()) return Eigen::MatrixXd::Constant(1, 1, v.get<double>());
  if (!v.is_array() || v.empty()) throw ConfigError("config key " + where + " must be a matrix");
  if (v[0].is_number()) {  // flat vector -> diagonal
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(v.size(), v.size());
    for (size_t i = 0; i < v.size(); ++i) m(i, i) = v[i].get<double>();
    return m;
  }
  const size_t rows = v.size(), cols = v[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (v[r].size() != cols) throw ConfigError("config key " + where + " has ragged rows");
    for (size_t c = 0; c < cols; ++c) m(r, c) = v[r][c].get<double>();
  }
  return m;
}

Eigen::VectorXd parse_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError("config key " + where + " must be an array");
  Eigen::VectorXd out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].get<double>();
  return out;
}

}  // namespace

json apply_env_overrides(json doc) {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> sections = {
      {"model",
       {"mach", "K_alpha", "K_q", "a_n", "b_n", "c_n", "d_n", "a_m", "b_m", "c_m", "d_m"}},
      {"uncertainty", {"distribution", "range", "mean", "stddev"}},
      {"cost", {"Q", "R"}},
      {"synthesis",
       {"method", "order", "samples", "quadrature_order", "epsilon_psd", "epsilon_stab",
        "wc_points"}},
      {"simulation", {"x0", "t_final", "dt", "x0_candidates"}},
  };
  for (const auto& [section, keys] : sections) {
    for (const auto& key : keys) {
      const std::string var = "PCLPV_" + upper(section) + "_" + upper(key);
      if (const char* value = std::getenv(var.c_str())) {
        try {
          doc[section][key] = json::parse(value);
        } catch (const json::parse_error&) {
          doc[section][key] = std::string(value);
        }
      }
    }
  }
  if (const char* value = std::getenv("PCLPV_SEED")) doc["seed"] = std::strtoull(value, nullptr, 10);
  return doc;
}

Config parse_config(const json& doc) {
  Config cfg;
  cfg.snapshot = doc;

  cfg.model.mach = require_number(doc, "model", "mach");
  cfg.model.K_alpha = require_number(doc, "model", "K_alpha");
  cfg.model.K_q = require_number(doc, "model", "K_q");
  cfg.model.a_n = require_number(doc, "model", "a_n");
  cfg.model.b_n = require_number(doc, "model", "b_n");
  cfg.model.c_n = require_number(doc, "model", "c_n");
  cfg.model.d_n = require_number(doc, "model", "d_n");
  cfg.model.a_m = require_number(doc, "model", "a_m");
  cfg.model.b_m = require_number(doc, "model", "b_m");
  cfg.model.c_m = require_number(doc, "model", "c_m");
  cfg.model.d_m = require_number(doc, "model", "d_m");

  const std::string family = require(doc, "uncertainty", "distribution").get<std::string>();
  if (family == "uniform") {
    const Eigen::VectorXd range =
        parse_vector(require(doc, "uncertainty", "range"), "uncertainty.range");
    if (range.size() != 2) throw ConfigError("uncertainty.range must be [lo, hi]");
    cfg.uncertainty = ParameterDistribution::uniform(range[0], range[1]);
    cfg.model.alpha_min = range[0];
    cfg.model.alpha_max = range[1];
  } else if (family == "gaussian") {
    cfg.uncertainty = ParameterDistribution::gaussian(
        require_number(doc, "uncertainty", "mean"), require_number(doc, "uncertainty", "stddev"));
  } else {
    throw ConfigError("uncertainty.distribution '" + family +
                      "' unsupported (uniform | gaussian)");
  }

  cfg.cost.Q = parse_matrix_or_scalar(require(doc, "cost", "Q"), "cost.Q");
  cfg.cost.R = parse_matrix_or_scalar(require(doc, "cost", "R"), "cost.R");
  cfg.cost.validate();

  cfg.synthesis.method = require(doc, "synthesis", "method").get<std::string>();
  if (cfg.synthesis.method != "lti" && cfg.synthesis.method != "lpv" &&
      cfg.synthesis.method != "pclpv" && cfg.synthesis.method != "sclpv")
    throw ConfigError("synthesis.method '" + cfg.synthesis.method +
                      "' unsupported (lti | lpv | pclpv | sclpv)");
  cfg.synthesis.order = static_cast<int>(require_number(doc, "synthesis", "order"));
  cfg.synthesis.samples = static_cast<int>(require_number(doc, "synthesis", "samples"));
  cfg.synthesis.quadrature_order =
      static_cast<int>(require_number(doc, "synthesis", "quadrature_order"));
  cfg.synthesis.epsilon_psd = require_number(doc, "synthesis", "epsilon_psd");
  cfg.synthesis.epsilon_stab = require_number(doc, "synthesis", "epsilon_stab");
  const Eigen::VectorXd wc =
      parse_vector(require(doc, "synthesis", "wc_points"), "synthesis.wc_points");
  cfg.synthesis.wc_points.assign(wc.data(), wc.data() + wc.size());

  cfg.simulation.x0 = parse_vector(require(doc, "simulation", "x0"), "simulation.x0");
  cfg.simulation.t_final = require_number(doc, "simulation", "t_final");
  cfg.simulation.dt = require_number(doc, "simulation", "dt");
  if (!(cfg.simulation.dt > 0.0)) throw ConfigError("simulation.dt must be positive");
  if (doc.at("simulation").contains("x0_candidates"))
    for (const auto& c : doc.at("simulation").at("x0_candidates"))
      cfg.simulation.x0_candidates.push_back(parse_vector(c, "simulation.x0_candidates"));

  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(apply_env_overrides(std::move(doc)));
}

}  // namespace pclpv
