#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pclpv/config.hpp"

namespace pclpv {

/// Stabilizing solution of AᵀP + PA - PBR⁻¹BᵀP + Q = 0 by integrating the
/// Riccati ODE to steady state. Independent of the SDP synthesis path; used
/// as the oracle for the LQR baselines.
Eigen::MatrixXd solve_riccati_ode(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                  double tol = 1e-13, double dt = 2e-3, double t_max = 400.0);

/// -R⁻¹BᵀP with P from the Riccati ODE.
Eigen::MatrixXd lqr_gain_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

struct SuiteResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst residual observed
  std::string detail;
};

/// Property suites: orthogonality, lemma1, prop1, corollary1, riccati,
/// galerkin_mc. An empty filter runs all. The orthogonality suite honors the
/// PCLPV_TEST_PERTURB_NORMS sabotage hook used by the CLI tests.
std::vector<SuiteResult> run_validation_suites(const std::vector<std::string>& filter,
                                               std::uint64_t seed);

}  // namespace pclpv
