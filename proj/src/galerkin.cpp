#include "pclpv/galerkin.hpp"

namespace pclpv {

PsiOrdering::PsiOrdering(int degree) : degree_(degree) {
  if (degree < 0) throw InputError("PsiOrdering: degree must be nonnegative");
  for (int j = 0; j <= degree; ++j)
    for (int i = j; i <= degree; ++i) pairs_.emplace_back(i, j);
}

Eigen::VectorXd PsiOrdering::eval(const Eigen::VectorXd& phi) const {
  if (phi.size() != degree_ + 1) throw DimensionError("PsiOrdering::eval: phi size mismatch");
  Eigen::VectorXd psi(length());
  for (int k = 0; k < length(); ++k) {
    const auto [i, j] = pairs_[k];
    psi[k] = scale_at(k) * phi[i] * phi[j];
  }
  return psi;
}

Eigen::MatrixXd project_dynamics(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                                 const QuadratureRule& rule) {
  const int n = sys.n;
  const int terms = basis.size();
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(n * terms, n * terms);
  for (Eigen::Index k = 0; k < rule.size(); ++k) {
    const Eigen::VectorXd phi = basis.evaluate(rule.nodes[k]);
    proj += rule.weights[k] * kron(phi * phi.transpose(), sys.A(rule.nodes[k]));
  }
  // Orthogonality makes the gram block diagonal; invert blockwise by norms.
  for (int i = 0; i < terms; ++i) proj.middleRows(i * n, n) /= basis.norm(i);
  return proj;
}

GalerkinTensors build_tensors(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                              const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                              const QuadratureRule& rule) {
  CostWeights{Q, R}.validate();
  if (Q.rows() != sys.n || R.rows() != sys.m)
    throw DimensionError("build_tensors: weight dimensions do not match the system");

  GalerkinTensors t;
  t.n = sys.n;
  t.m = sys.m;
  t.degree = basis.degree();
  const PsiOrdering ordering(basis.degree());
  t.L = ordering.length();

  const int terms = basis.size();
  const int rows1 = terms * t.L * t.n;
  const int rows2 = terms * terms * t.m;
  t.M1 = Eigen::MatrixXd::Zero(rows1, terms * t.n);
  t.M2 = Eigen::MatrixXd::Zero(rows2, terms * t.n);
  t.M3 = Eigen::MatrixXd::Zero(rows1, rows1);
  t.M4 = Eigen::MatrixXd::Zero(rows2, rows2);

  for (Eigen::Index k = 0; k < rule.size(); ++k) {
    const double delta = rule.nodes[k];
    const double w = rule.weights[k];
    const Eigen::VectorXd phi = basis.evaluate(delta);
    const Eigen::VectorXd psi = ordering.eval(phi);
    const Eigen::MatrixXd phiphi = phi * phi.transpose();
    const Eigen::MatrixXd psipsi = psi * psi.transpose();
    // (I ⊗ psi_n) Phi_n Aᵀ Phi_nᵀ           = phiphi ⊗ psi ⊗ Aᵀ
    // (I ⊗ Phi_m) Phi_m Bᵀ Phi_nᵀ           = phiphi ⊗ phi ⊗ Bᵀ
    // (I ⊗ psi_n) Phi_n Q Phi_nᵀ (I ⊗ psi_nᵀ) = phiphi ⊗ psipsi ⊗ Q
    // (I ⊗ Phi_m) Phi_m R Phi_mᵀ (I ⊗ Phi_mᵀ) = phiphi ⊗ phiphi ⊗ R
    t.M1 += w * kron(phiphi, kron(psi, sys.A(delta).transpose()));
    t.M2 += w * kron(phiphi, kron(phi, sys.B(delta).transpose()));
    t.M3 += w * kron(phiphi, kron(psipsi, Q));
    t.M4 += w * kron(phiphi, kron(phiphi, R));
  }

  t.gram = Eigen::MatrixXd::Zero(terms * t.n, terms * t.n);
  for (int i = 0; i < terms; ++i)
    t.gram.block(i * t.n, i * t.n, t.n, t.n) =
        basis.norm(i) * Eigen::MatrixXd::Identity(t.n, t.n);

  t.sqrtM3 = principal_sqrt(t.M3);
  t.sqrtM4 = principal_sqrt(t.M4);
  t.factor3 = sqrt_factor(t.M3);
  t.factor4 = sqrt_factor(t.M4);
  return t;
}

}  // namespace pclpv
