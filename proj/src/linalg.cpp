#include "pclpv/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace pclpv {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool kron_identity_check(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double tol) {
  const Eigen::Index mm = m.rows(), n = m.cols(), np1 = v.size();
  const Eigen::MatrixXd in = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd im = Eigen::MatrixXd::Identity(mm, mm);
  const Eigen::MatrixXd inp1 = Eigen::MatrixXd::Identity(np1, np1);
  const Eigen::MatrixXd lhs = m * kron(v.transpose(), in);
  const Eigen::MatrixXd rhs = kron(v.transpose(), im) * kron(inp1, m);
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw DimensionError("kron_identity_check: shape mismatch");
  return (lhs - rhs).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXd principal_sqrt(const Eigen::MatrixXd& s, double abort_floor) {
  if (symmetry_defect(s) > 1e-10 * (1.0 + s.cwiseAbs().maxCoeff()))
    throw InputError("principal_sqrt: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("principal_sqrt: eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < abort_floor)
      throw NumericalError("principal_sqrt: eigenvalue " + std::to_string(lam[i]) +
                           " below floor; matrix is not PSD up to quadrature noise");
    if (lam[i] < 0.0) lam[i] = 0.0;
  }
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd sqrt_factor(const Eigen::MatrixXd& s, double rank_tol, double abort_floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("sqrt_factor: eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const double lmax = std::max(lam.maxCoeff(), 0.0);
  if (lam.minCoeff() < abort_floor)
    throw NumericalError("sqrt_factor: matrix is not PSD up to quadrature noise");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > rank_tol * std::max(lmax, 1.0)) keep.push_back(i);
  Eigen::MatrixXd f(keep.size(), s.rows());
  for (size_t r = 0; r < keep.size(); ++r)
    f.row(r) = std::sqrt(lam[keep[r]]) * es.eigenvectors().col(keep[r]).transpose();
  return f;
}

double spectral_abscissa(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

double max_eigenvalue(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double symmetry_defect(const Eigen::MatrixXd& s) {
  return (s - s.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace pclpv
