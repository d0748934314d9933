#include <doctest.h>

#include <random>

#include "pclpv/plant.hpp"
#include "test_util.hpp"

using namespace pclpv;

namespace {

MissileConfig bench_missile() {
  MissileConfig cfg;
  cfg.mach = 2.5;
  cfg.K_alpha = 0.036;
  cfg.K_q = 1.77408;
  cfg.a_n = 0.000103;
  cfg.b_n = -0.00945;
  cfg.c_n = -0.145371;
  cfg.d_n = -0.034;
  cfg.a_m = 0.000215;
  cfg.b_m = -0.0195;
  cfg.c_m = -0.445;
  cfg.d_m = -0.206;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("plant");

TEST_CASE("aero coefficients vanish at the origin and isolate the fin term") {
  const MissileConfig cfg = bench_missile();
  auto [cn0, cm0] = aero_coeffs(cfg, 0.0, 0.0);
  CHECK(cn0 == 0.0);
  CHECK(cm0 == 0.0);
  auto [cnf, cmf] = aero_coeffs(cfg, 0.0, 1.0);
  CHECK(cnf == doctest::Approx(cfg.d_n).epsilon(1e-15));
  CHECK(cmf == doctest::Approx(cfg.d_m).epsilon(1e-15));
}

TEST_CASE("aero coefficients match a direct transcription at alpha = 10") {
  const MissileConfig cfg = bench_missile();
  auto [cn, cm] = aero_coeffs(cfg, 10.0, 0.0);
  const double cn_expect =
      10.0 * (0.000103 * 100.0 + (-0.00945) * 10.0 + (-0.145371) * (2.0 - 2.5 / 3.0));
  const double cm_expect =
      10.0 * (0.000215 * 100.0 + (-0.0195) * 10.0 + (-0.445) * (-7.0 + 8.0 * 2.5 / 3.0));
  CHECK(cn == doctest::Approx(cn_expect).epsilon(1e-14));
  CHECK(cm == doctest::Approx(cm_expect).epsilon(1e-14));
}

TEST_CASE("quasi-LPV structural constants") {
  const auto sys = missile_quasi_lpv(bench_missile());
  for (double rho : {-20.0, -3.7, 0.0, 11.2, 20.0}) {
    CHECK(sys.A(rho)(0, 1) == 1.0);
    CHECK(sys.A(rho)(1, 1) == 0.0);
  }
  const MissileConfig cfg = bench_missile();
  CHECK(sys.B(0.0)(0, 0) ==
        doctest::Approx(cfg.K_alpha * cfg.mach * cfg.d_n).epsilon(1e-15));
}

TEST_CASE("quasi-LPV form reproduces the nonlinear right-hand side exactly") {
  const MissileConfig cfg = bench_missile();
  const auto sys = missile_quasi_lpv(cfg);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ua(-20.0, 20.0), uq(-60.0, 60.0), ud(-30.0, 30.0);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector2d x(ua(rng), uq(rng));
    const double fin = ud(rng);
    const Eigen::Vector2d lhs = sys.A(x[0]) * x + sys.B(x[0]) * Eigen::VectorXd::Constant(1, fin);
    const Eigen::Vector2d rhs = missile_rhs(cfg, x, fin);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("origin linearization equals a central-difference jacobian") {
  const MissileConfig cfg = bench_missile();
  const auto [a0, b0] = linearize_origin(cfg);
  CHECK(a0(0, 1) == 1.0);
  CHECK(a0(0, 0) ==
        doctest::Approx(cfg.K_alpha * cfg.mach * cfg.c_n * (2.0 - cfg.mach / 3.0))
            .epsilon(1e-13));
  // the |alpha| terms leave an O(h) one-sided-curvature error in the central
  // difference, so h must stay well below 1e-6 / (K_q M^2 b_m)
  const double h = 1e-6;
  Eigen::MatrixXd jac(2, 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::Vector2d xp = Eigen::Vector2d::Zero(), xm = Eigen::Vector2d::Zero();
    xp[c] += h;
    xm[c] -= h;
    jac.col(c) = (missile_rhs(cfg, xp, 0.0) - missile_rhs(cfg, xm, 0.0)) / (2.0 * h);
  }
  CHECK((a0 - jac).cwiseAbs().maxCoeff() <= 1e-6);
  Eigen::Vector2d bdiff =
      (missile_rhs(cfg, Eigen::Vector2d::Zero(), h) - missile_rhs(cfg, Eigen::Vector2d::Zero(), -h)) /
      (2.0 * h);
  CHECK((b0 - bdiff).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("A and B stay finite and continuous over the envelope") {
  const auto sys = missile_quasi_lpv(bench_missile());
  Eigen::MatrixXd prev_a = sys.A(-20.0), prev_b = sys.B(-20.0);
  double max_step = 0.0;
  for (double rho = -20.0 + 0.01; rho <= 20.0 + 1e-9; rho += 0.01) {
    const Eigen::MatrixXd a = sys.A(rho), b = sys.B(rho);
    REQUIRE(a.allFinite());
    REQUIRE(b.allFinite());
    max_step = std::max(max_step, (a - prev_a).cwiseAbs().maxCoeff());
    max_step = std::max(max_step, (b - prev_b).cwiseAbs().maxCoeff());
    prev_a = a;
    prev_b = b;
  }
  CHECK(max_step <= 0.01);  // entries move O(step) per 0.01 degree
}

TEST_CASE("cost weight validation") {
  CostWeights ok{0.2 * Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(1, 1)};
  CHECK_NOTHROW(ok.validate());
  CostWeights bad_r{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(1, 1)};
  CHECK_THROWS_AS(bad_r.validate(), InputError);
  Eigen::MatrixXd nq(2, 2);
  nq << 1.0, 0.0, 0.0, -1.0;
  CostWeights bad_q{nq, Eigen::MatrixXd::Identity(1, 1)};
  CHECK_THROWS_AS(bad_q.validate(), InputError);
}

TEST_SUITE_END();
