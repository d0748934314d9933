#include <doctest.h>

#include <cstdio>

#include "pclpv/gains.hpp"

using namespace pclpv;

TEST_SUITE_BEGIN("gains");

TEST_CASE("static gain evaluates to the same matrix everywhere") {
  Eigen::MatrixXd k(1, 2);
  k << 0.4, 0.8;
  const Gain g = StaticGain{k, Eigen::MatrixXd::Identity(2, 2)};
  CHECK((eval_gain(g, -20.0) - k).cwiseAbs().maxCoeff() == 0.0);
  CHECK((eval_gain(g, 7.3) - k).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("affine gain singularity names delta") {
  AffineGain g;
  g.Y0 = Eigen::MatrixXd::Identity(2, 2);
  g.Y1 = -Eigen::MatrixXd::Identity(2, 2);  // singular at rho = 1
  g.W0 = Eigen::MatrixXd::Ones(1, 2);
  g.W1 = Eigen::MatrixXd::Zero(1, 2);
  CHECK_NOTHROW((void)eval_gain(Gain{g}, 0.0));
  CHECK_THROWS_WITH_AS((void)eval_gain(Gain{g}, 1.0),
                       doctest::Contains("delta = 1.0"), NumericalError);
}

TEST_CASE("collocation gain interpolates its node blocks") {
  const OrthoBasis basis(ParameterDistribution::uniform(-1.0, 1.0), 2);
  ScGain g{LagrangeBasis(basis), {}, {}};
  for (int i = 0; i < 3; ++i) {
    g.Ytt.push_back((i + 1.0) * Eigen::MatrixXd::Identity(2, 2));
    g.Wt.push_back(Eigen::MatrixXd::Constant(1, 2, 0.5 * (i + 1.0)));
  }
  for (int i = 0; i < 3; ++i) {
    const double node = g.lagrange.nodes()[i];
    const Eigen::MatrixXd expect = g.Wt[i] * g.Ytt[i].inverse();
    CHECK((eval_gain(Gain{g}, node) - expect).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((g.Y_of(node) - g.Ytt[i]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("pc gain reconstructs Y from the block quadratic form") {
  const OrthoBasis basis(ParameterDistribution::uniform(-1.0, 1.0), 1);
  PcGain g{basis, Eigen::MatrixXd::Zero(4, 4), {}};
  g.Ybar << 2.0, 0.1, 0.3, 0.0,  //
      0.1, 1.5, 0.0, 0.2,        //
      0.3, 0.0, 1.0, 0.05,       //
      0.0, 0.2, 0.05, 0.8;
  g.W.push_back(Eigen::MatrixXd::Constant(1, 2, 1.0));
  g.W.push_back(Eigen::MatrixXd::Constant(1, 2, -0.5));
  const double d = 0.37;
  const Eigen::VectorXd phi = basis.evaluate(d);
  const Eigen::MatrixXd phin = Eigen::MatrixXd({{phi[0], 0.0}, {0.0, phi[0]},
                                                {phi[1], 0.0}, {0.0, phi[1]}});
  const Eigen::MatrixXd expect = phin.transpose() * g.Ybar * phin;
  CHECK((g.Y_of(d) - expect).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((g.Y_of(d) - g.Y_of(d).transpose()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("gain json round trip preserves every payload bit") {
  const std::string path = "gain_roundtrip_test.json";
  const OrthoBasis basis(ParameterDistribution::uniform(-20.0, 20.0), 2);

  PcGain pc{basis, Eigen::MatrixXd::Random(6, 6), {}};
  pc.Ybar = (pc.Ybar + pc.Ybar.transpose()).eval();
  for (int i = 0; i < 3; ++i) pc.W.push_back(Eigen::MatrixXd::Random(1, 2));
  write_gain_json(Gain{pc}, path);
  const Gain pc_back = read_gain_json(path);
  const auto& pb = std::get<PcGain>(pc_back);
  CHECK((pb.Ybar - pc.Ybar).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK((pb.W[i] - pc.W[i]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(pb.basis.degree() == 2);
  CHECK(pb.basis.distribution().hi() == 20.0);

  ScGain sc{LagrangeBasis(basis), {}, {}};
  for (int i = 0; i < 3; ++i) {
    sc.Ytt.push_back(Eigen::MatrixXd::Random(2, 2));
    sc.Ytt.back() = (sc.Ytt.back() + sc.Ytt.back().transpose()).eval();
    sc.Wt.push_back(Eigen::MatrixXd::Random(1, 2));
  }
  write_gain_json(Gain{sc}, path);
  const Gain sc_back = read_gain_json(path);
  const auto& sb = std::get<ScGain>(sc_back);
  CHECK((sb.lagrange.nodes() - sc.lagrange.nodes()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK((sb.Ytt[i] - sc.Ytt[i]).cwiseAbs().maxCoeff() == 0.0);

  AffineGain lpv{Eigen::MatrixXd::Random(2, 2), Eigen::MatrixXd::Random(2, 2),
                 Eigen::MatrixXd::Random(1, 2), Eigen::MatrixXd::Random(1, 2)};
  write_gain_json(Gain{lpv}, path);
  const Gain lpv_back = read_gain_json(path);
  const auto& lb = std::get<AffineGain>(lpv_back);
  CHECK((lb.Y1 - lpv.Y1).cwiseAbs().maxCoeff() == 0.0);

  const StaticGain lti{Eigen::MatrixXd::Random(1, 2), Eigen::MatrixXd::Random(2, 2)};
  write_gain_json(Gain{lti}, path);
  const Gain lti_back = read_gain_json(path);
  CHECK((std::get<StaticGain>(lti_back).K - lti.K).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_SUITE_END();
