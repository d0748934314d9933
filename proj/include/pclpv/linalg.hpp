#pragma once

#include <Eigen/Dense>

#include "pclpv/common.hpp"

namespace pclpv {

/// Kronecker product A ⊗ B.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// X + Xᵀ.
inline Eigen::MatrixXd sym(const Eigen::MatrixXd& x) { return x + x.transpose(); }

/// Checks M(vᵀ⊗I_n) = (vᵀ⊗I_m)(I_{N+1}⊗M) for M ∈ R^{m×n}, v ∈ R^{N+1}.
bool kron_identity_check(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double tol = 1e-12);

/// Principal square root of a symmetric PSD matrix. Eigenvalues in
/// [abort_floor, 0) are clamped to zero; anything below abort_floor throws.
Eigen::MatrixXd principal_sqrt(const Eigen::MatrixXd& s, double abort_floor = -1e-8);

/// Rank-revealing factor F (r x d) with FᵀF = S for symmetric PSD S;
/// eigenvalues below rank_tol * max eigenvalue are dropped.
Eigen::MatrixXd sqrt_factor(const Eigen::MatrixXd& s, double rank_tol = 1e-12,
                            double abort_floor = -1e-8);

/// Maximum real part over the eigenvalues of a (general) square matrix.
double spectral_abscissa(const Eigen::MatrixXd& a);

/// Largest eigenvalue of a symmetric matrix.
double max_eigenvalue(const Eigen::MatrixXd& s);

/// max |S - Sᵀ| entry.
double symmetry_defect(const Eigen::MatrixXd& s);

}  // namespace pclpv
