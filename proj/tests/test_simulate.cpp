#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "pclpv/bench.hpp"
#include "pclpv/simulate.hpp"
#include "pclpv/synthesis.hpp"
#include "test_util.hpp"

using namespace pclpv;

#ifndef PCLPV_SOURCE_DIR
#define PCLPV_SOURCE_DIR "."
#endif

namespace {

Config reference_config() {
  return load_config(std::string(PCLPV_SOURCE_DIR) + "/configs/reference.json");
}

Gain reference_lti(const Config& cfg) {
  const auto [a0, b0] = linearize_origin(cfg.model);
  const auto res = synth_lti(a0, b0, cfg.cost);
  REQUIRE(res.ok());
  return *res.gain;
}

}  // namespace

TEST_SUITE_BEGIN("simulate");

TEST_CASE("equilibrium start stays at zero cost") {
  const Config cfg = reference_config();
  const SimResult r = simulate_closed_loop(cfg.model, cfg.cost, reference_lti(cfg),
                                           Eigen::Vector2d::Zero(), 1.0, 1e-3);
  CHECK(r.J == 0.0);
  CHECK(r.x.cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(r.diverged());
}

TEST_CASE("constant state with zero feedback accumulates T x'Qx") {
  // all aero coefficients zero and K = 0: alpha_dot = q = 0, q_dot = 0.
  const MissileConfig cfg = testutil::zero_aero_missile();
  const CostWeights cost{0.2 * Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(1, 1)};
  const Gain zero = StaticGain{Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Identity(2, 2)};
  const Eigen::Vector2d x0(3.0, 0.0);
  const SimResult r = simulate_closed_loop(cfg, cost, zero, x0, 5.0, 1e-3);
  const double expect = 5.0 * (x0.transpose() * cost.Q * x0)(0, 0);
  CHECK(r.J == doctest::Approx(expect).epsilon(1e-9));
  CHECK_FALSE(r.converged);  // parked away from the origin
}

TEST_CASE("halving the step changes the LTI cost by less than 0.01 percent") {
  const Config cfg = reference_config();
  const Gain g = reference_lti(cfg);
  const double j1 = simulate_closed_loop(cfg.model, cfg.cost, g, {10.0, 0.0}, 20.0, 1e-3).J;
  const double j2 = simulate_closed_loop(cfg.model, cfg.cost, g, {10.0, 0.0}, 20.0, 5e-4).J;
  CHECK(std::abs(j1 - j2) / j1 <= 1e-4);
}

TEST_CASE("integrator converges at fourth order") {
  const Config cfg = reference_config();
  const Gain g = reference_lti(cfg);
  const Eigen::Vector2d x0(10.0, 0.0);
  const double T = 2.0;
  auto final_state = [&](double dt) {
    const SimResult r = simulate_closed_loop(cfg.model, cfg.cost, g, x0, T, dt);
    return Eigen::Vector2d(r.x.row(r.x.rows() - 1));
  };
  const Eigen::Vector2d ref = final_state(2.5e-4);  // dt/8 reference
  const double e1 = (final_state(2e-3) - ref).norm();
  const double e2 = (final_state(1e-3) - ref).norm();
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("cost is additive across a restart") {
  const Config cfg = reference_config();
  const Gain g = reference_lti(cfg);
  const Eigen::Vector2d x0(8.0, -2.0);
  const SimResult full = simulate_closed_loop(cfg.model, cfg.cost, g, x0, 10.0, 1e-3);
  const SimResult first = simulate_closed_loop(cfg.model, cfg.cost, g, x0, 5.0, 1e-3);
  const Eigen::Vector2d mid = first.x.row(first.x.rows() - 1);
  const SimResult second = simulate_closed_loop(cfg.model, cfg.cost, g, mid, 5.0, 1e-3);
  CHECK(std::abs(full.J - (first.J + second.J)) <= 1e-9 * full.J);
}

TEST_CASE("two-sample LPV design does not converge on the benchmark") {
  const Config cfg = reference_config();
  const auto sys = missile_quasi_lpv(cfg.model);
  const auto res = synth_lpv_sampled(sys, cfg.cost, {-20.0, 20.0}, options_from(cfg));
  REQUIRE(res.ok());  // the synthesis itself is feasible
  const SimResult r = simulate_closed_loop(cfg.model, cfg.cost, *res.gain, cfg.simulation.x0,
                                           cfg.simulation.t_final, cfg.simulation.dt);
  CHECK(r.diverged());
  CHECK(std::isfinite(r.J));  // cost-so-far is still reported
}

TEST_CASE("trajectory csv format") {
  const Config cfg = reference_config();
  const SimResult r = simulate_closed_loop(cfg.model, cfg.cost, reference_lti(cfg),
                                           {5.0, 0.0}, 0.01, 1e-3);
  const std::string path = "traj_format_test.csv";
  write_trajectory_csv(r, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,alpha_deg,q_degps,deltafin_deg,running_cost");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 11);  // one per dt step including t = 0 and t = T
  std::remove(path.c_str());
}

TEST_CASE("galerkin propagation: constant dynamics have zero variance") {
  Eigen::MatrixXd a(1, 1);
  a << -0.8;
  const auto sys = testutil::constant_system(a, Eigen::MatrixXd::Zero(1, 1));
  const auto v = validate_galerkin(sys, OrthoBasis(sys.distribution, 3),
                                   Eigen::VectorXd::Ones(1), 1.0, 200, 1);
  // modes >= 1 start at exactly zero and only pick up quadrature roundoff
  CHECK(v.pc_var.cwiseAbs().maxCoeff() <= 1e-30);
  CHECK(v.pc_mean[0] == doctest::Approx(std::exp(-0.8)).epsilon(1e-9));
}

TEST_CASE("galerkin propagation matches monte carlo within one percent") {
  const auto v = [&] {
    UncertainLinearSystem sys;
    sys.n = 1;
    sys.m = 1;
    sys.distribution = ParameterDistribution::uniform(-1.0, 1.0);
    sys.A = [](double d) { return Eigen::MatrixXd::Constant(1, 1, -(1.0 + 0.5 * d)); };
    sys.B = [](double) { return Eigen::MatrixXd::Zero(1, 1); };
    return validate_galerkin(sys, OrthoBasis(sys.distribution, 3), Eigen::VectorXd::Ones(1),
                             1.0, 100000, 0);
  }();
  CHECK(v.mean_rel_err <= 0.01);
  CHECK(v.var_rel_err <= 0.01);
}

TEST_CASE("variance error against the closed form decays with the degree") {
  UncertainLinearSystem sys;
  sys.n = 1;
  sys.m = 1;
  sys.distribution = ParameterDistribution::uniform(-1.0, 1.0);
  sys.A = [](double d) { return Eigen::MatrixXd::Constant(1, 1, -(1.0 + 0.5 * d)); };
  sys.B = [](double) { return Eigen::MatrixXd::Zero(1, 1); };
  // exact moments of x(1) = exp(-(1 + d/2)): E = 2 e^{-1} sinh(1/2),
  // E[x^2] = e^{-2} sinh(1), var = E[x^2] - E^2.
  const double mean_exact = 2.0 * std::exp(-1.0) * std::sinh(0.5);
  const double var_exact = std::exp(-2.0) * std::sinh(1.0) - mean_exact * mean_exact;
  double prev = std::numeric_limits<double>::infinity();
  for (int N = 1; N <= 5; ++N) {
    const auto v = validate_galerkin(sys, OrthoBasis(sys.distribution, N),
                                     Eigen::VectorXd::Ones(1), 1.0, 2, 0);
    const double err = std::abs(v.pc_var[0] - var_exact);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_SUITE_END();
