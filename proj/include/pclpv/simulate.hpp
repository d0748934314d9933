#pragma once

#include <cstdint>
#include <string>

#include "pclpv/gains.hpp"
#include "pclpv/galerkin.hpp"
#include "pclpv/plant.hpp"

namespace pclpv {

/// Closed-loop trajectory with the accumulated quadratic cost. running_cost
/// holds the integrand xᵀQx + uᵀRu at each grid point; J is its trapezoidal
/// integral. blowup marks ||x|| escaping past 1e8 (or a singular gain), and
/// converged reports whether the final state returned to the origin; a
/// divergent run keeps the cost computed so far.
struct SimResult {
  Eigen::VectorXd t;
  Eigen::MatrixXd x;  // rows = time steps
  Eigen::MatrixXd u;
  Eigen::VectorXd running_cost;
  double J = 0.0;
  bool blowup = false;
  bool converged = true;

  bool diverged() const { return blowup || !converged; }
};

/// Integrates the nonlinear missile dynamics under u = K(alpha) x with
/// fixed-step RK4. The gain is evaluated at alpha clamped to the operating
/// envelope; the dynamics always use the true alpha.
SimResult simulate_closed_loop(const MissileConfig& cfg, const CostWeights& cost,
                               const Gain& gain, const Eigen::Vector2d& x0, double t_final,
                               double dt);

double cost_to_go(const SimResult& result);

/// CSV: t,alpha_deg,q_degps,deltafin_deg,running_cost, 12 significant digits.
void write_trajectory_csv(const SimResult& result, const std::string& path);

struct GalerkinValidation {
  Eigen::VectorXd pc_mean, mc_mean;
  Eigen::VectorXd pc_var, mc_var;
  double mean_rel_err = 0.0;
  double var_rel_err = 0.0;
};

/// Propagates the projected dynamics from a deterministic x0 (only mode 0
/// populated) and compares mean/variance at t_final against n_mc Monte Carlo
/// samples of the parameter.
GalerkinValidation validate_galerkin(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                                     const Eigen::VectorXd& x0, double t_final, int n_mc,
                                     std::uint64_t seed, double dt = 1e-3);

}  // namespace pclpv
