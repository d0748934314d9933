#include "pclpv/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "pclpv/linalg.hpp"

namespace pclpv {

AffineMatrix::AffineMatrix(int rows, int cols) : constant_(Eigen::MatrixXd::Zero(rows, cols)) {}

AffineMatrix AffineMatrix::constant(Eigen::MatrixXd c) {
  AffineMatrix a(static_cast<int>(c.rows()), static_cast<int>(c.cols()));
  a.constant_ = std::move(c);
  return a;
}

AffineMatrix& AffineMatrix::add_constant(const Eigen::MatrixXd& c) {
  constant_ += c;
  return *this;
}

AffineMatrix& AffineMatrix::add_term(int var, const Eigen::MatrixXd& coeff) {
  auto [it, inserted] = terms_.try_emplace(var, coeff);
  if (!inserted) it->second += coeff;
  return *this;
}

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& other) {
  if (other.rows() != rows() || other.cols() != cols())
    throw DimensionError("AffineMatrix: dimension mismatch in +=");
  constant_ += other.constant_;
  for (const auto& [v, c] : other.terms_) add_term(v, c);
  return *this;
}

AffineMatrix AffineMatrix::scaled(double s) const {
  AffineMatrix out = *this;
  out.constant_ *= s;
  for (auto& [v, c] : out.terms_) c *= s;
  return out;
}

AffineMatrix AffineMatrix::transposed() const {
  AffineMatrix out(cols(), rows());
  out.constant_ = constant_.transpose();
  for (const auto& [v, c] : terms_) out.terms_[v] = c.transpose();
  return out;
}

AffineMatrix AffineMatrix::symmetrized() const {
  if (rows() != cols()) throw DimensionError("AffineMatrix::symmetrized: not square");
  AffineMatrix out(rows(), cols());
  out.constant_ = constant_ + constant_.transpose();
  for (const auto& [v, c] : terms_) out.terms_[v] = c + c.transpose();
  return out;
}

AffineMatrix AffineMatrix::left_right(const Eigen::MatrixXd& l, const Eigen::MatrixXd& r) const {
  auto apply = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
    Eigen::MatrixXd y = l.size() ? Eigen::MatrixXd(l * x) : x;
    return r.size() ? Eigen::MatrixXd(y * r) : y;
  };
  AffineMatrix out = AffineMatrix::constant(apply(constant_));
  for (const auto& [v, c] : terms_) out.terms_[v] = apply(c);
  return out;
}

AffineMatrix AffineMatrix::kron_identity_lift(int k) const {
  const Eigen::MatrixXd ik = Eigen::MatrixXd::Identity(k, k);
  AffineMatrix out = AffineMatrix::constant(kron(ik, constant_));
  for (const auto& [v, c] : terms_) out.terms_[v] = kron(ik, c);
  return out;
}

Eigen::MatrixXd AffineMatrix::eval(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd out = constant_;
  for (const auto& [v, c] : terms_) {
    if (v < 0 || v >= y.size()) throw DimensionError("AffineMatrix::eval: variable out of range");
    out += y[v] * c;
  }
  return out;
}

namespace {

Eigen::SparseMatrix<double> to_sparse(const Eigen::MatrixXd& m) {
  Eigen::SparseMatrix<double> s(m.rows(), m.cols());
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) trips.emplace_back(i, j, m(i, j));
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

void check_symmetric(const Eigen::MatrixXd& m, const std::string& what) {
  if (m.rows() != m.cols()) throw DimensionError(what + ": not square");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputError(what + ": coefficient matrix not symmetric");
}

}  // namespace

LmiBlock LmiBlock::negative_semidefinite(std::string name, const AffineMatrix& expr) {
  LmiBlock b;
  b.name = std::move(name);
  b.dim = expr.rows();
  check_symmetric(expr.constant_part(), b.name);
  b.constant = to_sparse(expr.constant_part());
  for (const auto& [v, c] : expr.terms()) {
    check_symmetric(c, b.name);
    b.terms.emplace_back(v, to_sparse(c));
  }
  return b;
}

LmiBlock LmiBlock::positive_semidefinite(std::string name, const AffineMatrix& expr) {
  return negative_semidefinite(std::move(name), expr.scaled(-1.0));
}

Eigen::MatrixXd LmiBlock::eval(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd m = Eigen::MatrixXd(constant);
  for (const auto& [v, c] : terms) m += y[v] * Eigen::MatrixXd(c);
  return m;
}

int SdpProblem::add_variable(std::string name) {
  names_.push_back(std::move(name));
  objective_.push_back(0.0);
  return static_cast<int>(names_.size()) - 1;
}

void SdpProblem::add_objective(int var, double coeff) {
  if (var < 0 || var >= num_variables()) throw DimensionError("add_objective: unknown variable");
  objective_[var] += coeff;
}

Eigen::VectorXd SdpProblem::objective_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(objective_.data(), objective_.size());
}

void SdpProblem::add_block(LmiBlock block) {
  for (const auto& [v, c] : block.terms) {
    if (v < 0 || v >= num_variables())
      throw DimensionError("add_block(" + block.name + "): variable index " + std::to_string(v) +
                           " does not exist");
    if (c.rows() != block.dim || c.cols() != block.dim)
      throw DimensionError("add_block(" + block.name + "): coefficient dimension mismatch");
  }
  blocks_.push_back(std::move(block));
}

const char* to_string(SdpSolution::Status s) {
  switch (s) {
    case SdpSolution::Status::Optimal: return "optimal";
    case SdpSolution::Status::Infeasible: return "infeasible";
    case SdpSolution::Status::Unbounded: return "unbounded";
    case SdpSolution::Status::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

SymmetricVar::SymmetricVar(SdpProblem& problem, const std::string& prefix, int dim) : dim_(dim) {
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c <= r; ++c)
      idx_.push_back(problem.add_variable(prefix + "[" + std::to_string(r) + "," +
                                          std::to_string(c) + "]"));
}

int SymmetricVar::var(int r, int c) const {
  if (c > r) std::swap(r, c);
  return idx_[r * (r + 1) / 2 + c];
}

AffineMatrix SymmetricVar::expr() const {
  AffineMatrix a(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c <= r; ++c) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim_, dim_);
      e(r, c) = 1.0;
      e(c, r) = 1.0;
      a.add_term(var(r, c), e);
    }
  return a;
}

Eigen::MatrixXd SymmetricVar::value(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c <= r; ++c) m(r, c) = m(c, r) = y[var(r, c)];
  return m;
}

RectVar::RectVar(SdpProblem& problem, const std::string& prefix, int rows, int cols)
    : rows_(rows), cols_(cols) {
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      idx_.push_back(problem.add_variable(prefix + "[" + std::to_string(r) + "," +
                                          std::to_string(c) + "]"));
}

AffineMatrix RectVar::expr() const {
  AffineMatrix a(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(rows_, cols_);
      e(r, c) = 1.0;
      a.add_term(var(r, c), e);
    }
  return a;
}

Eigen::MatrixXd RectVar::value(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(r, c) = y[var(r, c)];
  return m;
}

LmiBlock schur_wrap(std::string name, const AffineMatrix& m11,
                    const std::vector<std::pair<AffineMatrix, Eigen::MatrixXd>>& factors) {
  if (m11.rows() != m11.cols()) throw DimensionError("schur_wrap: m11 not square");
  const int d0 = m11.rows();
  int total = d0;
  for (const auto& [b, s] : factors) {
    if (s.cols() != b.rows())
      throw DimensionError("schur_wrap: square-root factor dimension mismatch");
    if (b.cols() != d0) throw DimensionError("schur_wrap: border column count must match m11");
    total += static_cast<int>(s.rows());
  }

  AffineMatrix big(total);
  auto place = [&](const AffineMatrix& expr, int row, int col, AffineMatrix& dst) {
    const auto embed = [&](const Eigen::MatrixXd& piece) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(total, total);
      e.block(row, col, piece.rows(), piece.cols()) = piece;
      if (row != col) e.block(col, row, piece.cols(), piece.rows()) = piece.transpose();
      return e;
    };
    dst.add_constant(embed(expr.constant_part()));
    for (const auto& [v, c] : expr.terms()) dst.add_term(v, embed(c));
  };

  place(m11, 0, 0, big);
  int offset = d0;
  for (const auto& [b, s] : factors) {
    const int dk = static_cast<int>(s.rows());
    place(b.left_right(s, {}), offset, 0, big);  // S_k B_k in the border
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(total, total);
    diag.block(offset, offset, dk, dk) = -Eigen::MatrixXd::Identity(dk, dk);
    big.add_constant(diag);
    offset += dk;
  }
  return LmiBlock::negative_semidefinite(std::move(name), big);
}

double residual(const SdpProblem& problem, const Eigen::VectorXd& values) {
  if (problem.blocks().empty()) return -std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& b : problem.blocks()) worst = std::max(worst, max_eigenvalue(b.eval(values)));
  return worst;
}

}  // namespace pclpv
