#include "pclpv/gains.hpp"

#include <json.hpp>

#include <Eigen/SVD>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pclpv/common.hpp"

namespace pclpv {

Eigen::MatrixXd PcGain::Y_of(double delta) const {
  const int nn = n();
  const Eigen::VectorXd phi = basis.evaluate(delta);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(nn, nn);
  for (int i = 0; i < basis.size(); ++i)
    for (int j = 0; j < basis.size(); ++j)
      y += phi[i] * phi[j] * Ybar.block(i * nn, j * nn, nn, nn);
  return y;
}

Eigen::MatrixXd PcGain::W_of(double delta) const {
  const Eigen::VectorXd phi = basis.evaluate(delta);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(W[0].rows(), W[0].cols());
  for (int i = 0; i < basis.size(); ++i) w += phi[i] * W[i];
  return w;
}

Eigen::MatrixXd ScGain::Y_of(double delta) const {
  const Eigen::VectorXd l = lagrange.evaluate(delta);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(Ytt[0].rows(), Ytt[0].cols());
  for (int i = 0; i < lagrange.size(); ++i) y += l[i] * Ytt[i];
  return y;
}

Eigen::MatrixXd ScGain::W_of(double delta) const {
  const Eigen::VectorXd l = lagrange.evaluate(delta);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(Wt[0].rows(), Wt[0].cols());
  for (int i = 0; i < lagrange.size(); ++i) w += l[i] * Wt[i];
  return w;
}

namespace {

Eigen::MatrixXd solve_gain(const Eigen::MatrixXd& w, const Eigen::MatrixXd& y, double delta) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > 1e10)
    throw NumericalError("eval_gain: Y(delta) singular or ill-conditioned at delta = " +
                         std::to_string(delta));
  return w * svd.solve(Eigen::MatrixXd::Identity(y.rows(), y.cols()));
}

}  // namespace

Eigen::MatrixXd eval_gain(const Gain& gain, double delta) {
  return std::visit(
      [&](const auto& g) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, StaticGain>)
          return g.K;
        else
          return solve_gain(g.W_of(delta), g.Y_of(delta), delta);
      },
      gain);
}

Eigen::MatrixXd gain_certificate(const Gain& gain, double delta) {
  return std::visit(
      [&](const auto& g) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, StaticGain>)
          return g.Y;
        else
          return g.Y_of(delta);
      },
      gain);
}

int gain_state_dim(const Gain& gain) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, StaticGain>)
          return static_cast<int>(g.K.cols());
        else if constexpr (std::is_same_v<T, AffineGain>)
          return static_cast<int>(g.Y0.rows());
        else if constexpr (std::is_same_v<T, PcGain>)
          return g.n();
        else
          return static_cast<int>(g.Ytt[0].rows());
      },
      gain);
}

int gain_input_dim(const Gain& gain) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, StaticGain>)
          return static_cast<int>(g.K.rows());
        else if constexpr (std::is_same_v<T, AffineGain>)
          return static_cast<int>(g.W0.rows());
        else if constexpr (std::is_same_v<T, PcGain>)
          return static_cast<int>(g.W[0].rows());
        else
          return static_cast<int>(g.Wt[0].rows());
      },
      gain);
}

std::string gain_type_name(const Gain& gain) {
  switch (gain.index()) {
    case 0: return "lti";
    case 1: return "lpv";
    case 2: return "pclpv";
    case 3: return "sclpv";
  }
  return "?";
}

namespace {

// Writer with explicit %.17g formatting; parsing goes through nlohmann.
class JsonWriter {
 public:
  std::string str() const { return out_.str(); }
  void raw(const std::string& s) { out_ << s; }
  void num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out_ << buf;
  }
  void matrix(const Eigen::MatrixXd& m, int indent) {
    const std::string pad(indent, ' ');
    out_ << "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out_ << (r ? ",\n" + pad + " " : "");
      out_ << "[";
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out_ << ", ";
        num(m(r, c));
      }
      out_ << "]";
    }
    out_ << "]";
  }
  void vector(const Eigen::VectorXd& v) {
    out_ << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) out_ << ", ";
      num(v[i]);
    }
    out_ << "]";
  }

 private:
  std::ostringstream out_;
};

void write_distribution(JsonWriter& w, const ParameterDistribution& d) {
  if (d.family() == DistributionFamily::Uniform) {
    w.raw("{\"family\": \"uniform\", \"lo\": ");
    w.num(d.lo());
    w.raw(", \"hi\": ");
    w.num(d.hi());
    w.raw("}");
  } else {
    w.raw("{\"family\": \"gaussian\", \"mean\": ");
    w.num(d.mean());
    w.raw(", \"stddev\": ");
    w.num(d.stddev());
    w.raw("}");
  }
}

ParameterDistribution parse_distribution(const nlohmann::json& j) {
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "uniform")
    return ParameterDistribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (fam == "gaussian")
    return ParameterDistribution::gaussian(j.at("mean").get<double>(),
                                           j.at("stddev").get<double>());
  throw ConfigError("gain json: unsupported distribution family '" + fam + "'");
}

Eigen::MatrixXd parse_matrix(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("gain json: matrix must be a nested array");
  const size_t rows = j.size(), cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) throw ConfigError("gain json: ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Eigen::VectorXd parse_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace

void write_gain_json(const Gain& gain, const std::string& path) {
  JsonWriter w;
  w.raw("{\n  \"type\": \"" + gain_type_name(gain) + "\",\n");
  w.raw("  \"n\": " + std::to_string(gain_state_dim(gain)) + ",\n");
  w.raw("  \"m\": " + std::to_string(gain_input_dim(gain)));
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, StaticGain>) {
          w.raw(",\n  \"K\": ");
          w.matrix(g.K, 8);
          w.raw(",\n  \"Y\": ");
          w.matrix(g.Y, 8);
        } else if constexpr (std::is_same_v<T, AffineGain>) {
          w.raw(",\n  \"Y0\": ");
          w.matrix(g.Y0, 9);
          w.raw(",\n  \"Y1\": ");
          w.matrix(g.Y1, 9);
          w.raw(",\n  \"W0\": ");
          w.matrix(g.W0, 9);
          w.raw(",\n  \"W1\": ");
          w.matrix(g.W1, 9);
        } else if constexpr (std::is_same_v<T, PcGain>) {
          w.raw(",\n  \"distribution\": ");
          write_distribution(w, g.basis.distribution());
          w.raw(",\n  \"degree\": " + std::to_string(g.basis.degree()));
          w.raw(",\n  \"Ybar\": ");
          w.matrix(g.Ybar, 10);
          w.raw(",\n  \"W\": [\n");
          for (size_t i = 0; i < g.W.size(); ++i) {
            w.raw("    ");
            w.matrix(g.W[i], 5);
            w.raw(i + 1 < g.W.size() ? ",\n" : "\n");
          }
          w.raw("  ]");
        } else {
          w.raw(",\n  \"distribution\": ");
          write_distribution(w, g.lagrange.distribution());
          w.raw(",\n  \"nodes\": ");
          w.vector(g.lagrange.nodes());
          w.raw(",\n  \"node_expectations\": ");
          w.vector(g.lagrange.node_expectations());
          w.raw(",\n  \"Y\": [\n");
          for (size_t i = 0; i < g.Ytt.size(); ++i) {
            w.raw("    ");
            w.matrix(g.Ytt[i], 5);
            w.raw(i + 1 < g.Ytt.size() ? ",\n" : "\n");
          }
          w.raw("  ],\n  \"W\": [\n");
          for (size_t i = 0; i < g.Wt.size(); ++i) {
            w.raw("    ");
            w.matrix(g.Wt[i], 5);
            w.raw(i + 1 < g.Wt.size() ? ",\n" : "\n");
          }
          w.raw("  ]");
        }
      },
      gain);
  w.raw("\n}\n");
  std::ofstream out(path);
  if (!out) throw ConfigError("write_gain_json: cannot open " + path);
  out << w.str();
}

Gain read_gain_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_gain_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  const std::string type = j.at("type").get<std::string>();
  if (type == "lti") {
    return StaticGain{parse_matrix(j.at("K")), parse_matrix(j.at("Y"))};
  }
  if (type == "lpv") {
    return AffineGain{parse_matrix(j.at("Y0")), parse_matrix(j.at("Y1")),
                      parse_matrix(j.at("W0")), parse_matrix(j.at("W1"))};
  }
  if (type == "pclpv") {
    PcGain g{OrthoBasis(parse_distribution(j.at("distribution")), j.at("degree").get<int>()),
             parse_matrix(j.at("Ybar")),
             {}};
    for (const auto& wj : j.at("W")) g.W.push_back(parse_matrix(wj));
    return g;
  }
  if (type == "sclpv") {
    ScGain g{LagrangeBasis(parse_distribution(j.at("distribution")),
                           parse_vector(j.at("nodes")), parse_vector(j.at("node_expectations"))),
             {},
             {}};
    for (const auto& yj : j.at("Y")) g.Ytt.push_back(parse_matrix(yj));
    for (const auto& wj : j.at("W")) g.Wt.push_back(parse_matrix(wj));
    return g;
  }
  throw ConfigError("read_gain_json: unknown gain type '" + type + "'");
}

}  // namespace pclpv
