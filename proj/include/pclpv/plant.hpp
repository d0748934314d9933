#pragma once

#include <Eigen/Dense>
#include <functional>

#include "pclpv/ortho.hpp"

namespace pclpv {

/// Linear system whose matrices depend on a scalar random parameter.
struct UncertainLinearSystem {
  int n = 0;
  int m = 0;
  std::function<Eigen::MatrixXd(double)> A;
  std::function<Eigen::MatrixXd(double)> B;
  ParameterDistribution distribution = ParameterDistribution::uniform(-1.0, 1.0);
};

/// Quadratic regulator weights.
struct CostWeights {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;

  /// Throws InputError unless Q = Qᵀ ⪰ 0 and R = Rᵀ ≻ 0.
  void validate() const;
};

/// Pitch-axis missile data. States are angle of attack alpha [deg] and pitch
/// rate q [deg/s]; the input is tail fin deflection [deg]. Aerodynamic
/// coefficients are per-degree powers; mach is held constant. The numeric
/// values ship in configs/reference.json and are treated as external inputs.
struct MissileConfig {
  double mach = 2.5;
  double K_alpha = 0.0;  // 1/s per unit C_n * M
  double K_q = 0.0;      // 1/s^2 per unit C_m * M^2
  double a_n = 0.0, b_n = 0.0, c_n = 0.0, d_n = 0.0;
  double a_m = 0.0, b_m = 0.0, c_m = 0.0, d_m = 0.0;
  double alpha_min = -20.0;  // operating envelope [deg]
  double alpha_max = 20.0;
};

/// Aerodynamic coefficients (C_n, C_m) at angle of attack alpha and fin
/// deflection, both in degrees.
std::pair<double, double> aero_coeffs(const MissileConfig& cfg, double alpha_deg, double fin_deg);

/// Nonlinear right-hand side (alpha_dot, q_dot).
Eigen::Vector2d missile_rhs(const MissileConfig& cfg, const Eigen::Vector2d& x, double fin_deg);

/// Exact quasi-LPV form with scheduling parameter rho := alpha, uniformly
/// distributed over the operating envelope. A(rho) x + B(rho) u reproduces
/// the nonlinear right-hand side when rho = alpha.
UncertainLinearSystem missile_quasi_lpv(const MissileConfig& cfg);

/// (A, B) of the quasi-LPV form at rho = 0, i.e. the linearization about the
/// origin.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> linearize_origin(const MissileConfig& cfg);

}  // namespace pclpv
