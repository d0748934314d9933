#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "pclpv/linalg.hpp"
#include "pclpv/ortho.hpp"
#include "pclpv/plant.hpp"

namespace pclpv {

/// Ordering of the quadratic basis products phi_i * phi_j, i >= j, used both
/// for the psi vector and for the stacked block variable V_Y. Enumeration is
/// column-major over the lower triangle: (0,0),(1,0),...,(N,0),(1,1),...,(N,N).
/// Off-diagonal entries carry a factor of two so that psi_nᵀ V_Y reproduces
/// Σ_{ij} phi_i phi_j Y_ij for symmetric block sets.
class PsiOrdering {
 public:
  explicit PsiOrdering(int degree);

  int degree() const { return degree_; }
  int length() const { return static_cast<int>(pairs_.size()); }
  std::pair<int, int> pair_at(int k) const { return pairs_.at(k); }
  double scale_at(int k) const { return pairs_[k].first == pairs_[k].second ? 1.0 : 2.0; }

  /// psi(delta) from the basis values [phi_0..phi_N].
  Eigen::VectorXd eval(const Eigen::VectorXd& phi) const;

 private:
  int degree_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Expectation tensors of the Galerkin synthesis LMI for a given system,
/// basis, and cost. Dimensions for basis index bound N, L = (N+1)(N+2)/2:
///   gram   : n(N+1)   x n(N+1)   block-diagonal E[phi_i^2] I_n
///   M1     : (N+1)Ln  x (N+1)n
///   M2     : (N+1)^2m x (N+1)n
///   M3     : (N+1)Ln  x (N+1)Ln   symmetric PSD
///   M4     : (N+1)^2m x (N+1)^2m  symmetric PSD
struct GalerkinTensors {
  int n = 0, m = 0, degree = 0, L = 0;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd M1, M2, M3, M4;
  Eigen::MatrixXd sqrtM3, sqrtM4;
  // Rank-revealing factors (factorᵀ factor = M); M3, M4 have large exact null
  // spaces, so the synthesis LMI uses these to keep the Schur block small.
  Eigen::MatrixXd factor3, factor4;
};

/// Galerkin projection of the parameter-dependent dynamics:
/// A_pc = E[Phi_n Phi_nᵀ]⁻¹ E[Phi_n A(delta) Phi_nᵀ], size n(N+1).
Eigen::MatrixXd project_dynamics(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                                 const QuadratureRule& rule);

/// Assembles M1..M4 by quadrature over delta and computes the principal
/// square roots of M3, M4 (eigenvalues in [-1e-8, 0) clamped to zero).
GalerkinTensors build_tensors(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                              const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                              const QuadratureRule& rule);

}  // namespace pclpv
