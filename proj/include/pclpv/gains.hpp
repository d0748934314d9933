#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "pclpv/ortho.hpp"

namespace pclpv {

/// Constant state feedback u = K x. Y is the Lyapunov certificate from the
/// synthesis (P = Y⁻¹), kept for decay certification.
struct StaticGain {
  Eigen::MatrixXd K;
  Eigen::MatrixXd Y;
};

/// Affine classical-LPV gain: K(rho) = (W0 + rho W1)(Y0 + rho Y1)⁻¹.
struct AffineGain {
  Eigen::MatrixXd Y0, Y1;
  Eigen::MatrixXd W0, W1;

  Eigen::MatrixXd Y_of(double rho) const { return Y0 + rho * Y1; }
  Eigen::MatrixXd W_of(double rho) const { return W0 + rho * W1; }
};

/// Galerkin polynomial-chaos gain: Y(delta) = Phi_nᵀ(delta) Ybar Phi_n(delta),
/// W(delta) = Σ phi_i(delta) W_i, K = W Y⁻¹.
struct PcGain {
  OrthoBasis basis;
  Eigen::MatrixXd Ybar;              // n(N+1) x n(N+1), symmetric PSD
  std::vector<Eigen::MatrixXd> W;    // N+1 blocks, m x n

  int n() const { return static_cast<int>(Ybar.rows()) / basis.size(); }
  Eigen::MatrixXd Y_of(double delta) const;
  Eigen::MatrixXd W_of(double delta) const;
};

/// Collocation gain. The synthesis only identifies the diagonal node blocks
/// Ytt_i; the off-diagonal blocks of the full quadratic form are filled with
/// the block means (Ytt_i + Ytt_j)/2, which collapses the evaluation to the
/// Lagrange interpolants of the node data:
///   Y(delta) = Σ l_i(delta) Ytt_i,  W(delta) = Σ l_i(delta) Wt_i.
/// This keeps K(delta) = W Y⁻¹ exact at the nodes and smooth between them.
struct ScGain {
  LagrangeBasis lagrange;
  std::vector<Eigen::MatrixXd> Ytt;  // N+1 blocks, n x n, PD
  std::vector<Eigen::MatrixXd> Wt;   // N+1 blocks, m x n

  Eigen::MatrixXd Y_of(double delta) const;
  Eigen::MatrixXd W_of(double delta) const;
};

using Gain = std::variant<StaticGain, AffineGain, PcGain, ScGain>;

/// K(delta). Throws NumericalError naming delta when Y(delta) is singular or
/// has condition number above 1e10.
Eigen::MatrixXd eval_gain(const Gain& gain, double delta);

/// Lyapunov certificate Y(delta) for the gain (constant for StaticGain).
Eigen::MatrixXd gain_certificate(const Gain& gain, double delta);

int gain_state_dim(const Gain& gain);
int gain_input_dim(const Gain& gain);
std::string gain_type_name(const Gain& gain);

/// JSON serialization, 17 significant digits.
void write_gain_json(const Gain& gain, const std::string& path);
Gain read_gain_json(const std::string& path);

}  // namespace pclpv
