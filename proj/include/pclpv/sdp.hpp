#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <string>
#include <vector>

#include "pclpv/common.hpp"

namespace pclpv {

/// Matrix-valued expression affine in scalar decision variables:
/// constant + Σ y_v * coeff_v. Coefficients are dense (the expressions stay
/// small; the assembled LMI blocks are stored sparse).
class AffineMatrix {
 public:
  AffineMatrix(int rows, int cols);
  explicit AffineMatrix(int dim) : AffineMatrix(dim, dim) {}
  static AffineMatrix constant(Eigen::MatrixXd c);

  int rows() const { return static_cast<int>(constant_.rows()); }
  int cols() const { return static_cast<int>(constant_.cols()); }
  const Eigen::MatrixXd& constant_part() const { return constant_; }
  const std::map<int, Eigen::MatrixXd>& terms() const { return terms_; }

  AffineMatrix& add_constant(const Eigen::MatrixXd& c);
  AffineMatrix& add_term(int var, const Eigen::MatrixXd& coeff);
  AffineMatrix& operator+=(const AffineMatrix& other);
  AffineMatrix scaled(double s) const;
  AffineMatrix transposed() const;
  /// X + Xᵀ (square only).
  AffineMatrix symmetrized() const;
  /// L * X * R for constant L, R (pass empty matrix for identity).
  AffineMatrix left_right(const Eigen::MatrixXd& l, const Eigen::MatrixXd& r) const;
  /// I_k ⊗ X.
  AffineMatrix kron_identity_lift(int k) const;

  Eigen::MatrixXd eval(const Eigen::VectorXd& y) const;

 private:
  Eigen::MatrixXd constant_;
  std::map<int, Eigen::MatrixXd> terms_;
};

/// One LMI constraint: constant + Σ y_v coeff_v ⪯ 0, all matrices symmetric.
struct LmiBlock {
  std::string name;
  int dim = 0;
  Eigen::SparseMatrix<double> constant;
  std::vector<std::pair<int, Eigen::SparseMatrix<double>>> terms;

  /// expr ⪯ 0.
  static LmiBlock negative_semidefinite(std::string name, const AffineMatrix& expr);
  /// expr ⪰ 0 (stored negated).
  static LmiBlock positive_semidefinite(std::string name, const AffineMatrix& expr);

  Eigen::MatrixXd eval(const Eigen::VectorXd& y) const;
};

/// Linear objective (maximize) over scalar variables subject to LMI blocks.
class SdpProblem {
 public:
  int add_variable(std::string name);
  int num_variables() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& variable_names() const { return names_; }

  void add_objective(int var, double coeff);
  Eigen::VectorXd objective_vector() const;

  /// Validates symmetry of every coefficient and that referenced variables
  /// exist, then stores the block.
  void add_block(LmiBlock block);
  const std::vector<LmiBlock>& blocks() const { return blocks_; }

 private:
  std::vector<std::string> names_;
  std::vector<double> objective_;
  std::vector<LmiBlock> blocks_;
};

/// Status of a solve. Values are present iff Optimal.
struct SdpSolution {
  enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };
  Status status = Status::NumericalFailure;
  Eigen::VectorXd values;
  double objective = 0.0;
  double solve_seconds = 0.0;
  int iterations = 0;
  std::string message;
};

const char* to_string(SdpSolution::Status s);

/// Symmetric matrix variable stored as lower-triangle scalars in row-major
/// (row, col) order: (0,0),(1,0),(1,1),(2,0),...
class SymmetricVar {
 public:
  SymmetricVar(SdpProblem& problem, const std::string& prefix, int dim);
  int dim() const { return dim_; }
  int var(int r, int c) const;
  AffineMatrix expr() const;
  Eigen::MatrixXd value(const Eigen::VectorXd& y) const;
  int count() const { return static_cast<int>(idx_.size()); }

 private:
  int dim_;
  std::vector<int> idx_;
};

/// General rows x cols matrix variable, row-major scalar order.
class RectVar {
 public:
  RectVar(SdpProblem& problem, const std::string& prefix, int rows, int cols);
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int var(int r, int c) const { return idx_[r * cols_ + c]; }
  AffineMatrix expr() const;
  Eigen::MatrixXd value(const Eigen::VectorXd& y) const;
  int count() const { return static_cast<int>(idx_.size()); }

 private:
  int rows_, cols_;
  std::vector<int> idx_;
};

/// Schur-complement linearization of m11 + Σ B_kᵀ S_kᵀS_k B_k ⪯ 0 with
/// constant square-root factors S_k and affine borders B_k:
///   [ m11      B_1ᵀS_1ᵀ B_2ᵀS_2ᵀ ... ]
///   [ S_1B_1   -I       0            ]  ⪯ 0.
///   [ S_2B_2   0        -I           ]
/// S_k is typically the (square, PSD) principal square root; a rank-revealing
/// rectangular factor from sqrt_factor gives the same feasible set with a
/// smaller block.
LmiBlock schur_wrap(std::string name, const AffineMatrix& m11,
                    const std::vector<std::pair<AffineMatrix, Eigen::MatrixXd>>& factors);

/// Max over blocks of the largest eigenvalue of the evaluated block
/// (negative means feasible, -inf when the problem has no constraints).
double residual(const SdpProblem& problem, const Eigen::VectorXd& values);

/// SDPA sparse interchange files (.dat-s), 17 significant digits. Variable
/// and block names are preserved in comment lines so a round trip
/// reconstructs the identical problem.
void write_sdpa(const SdpProblem& problem, const std::string& path);
SdpProblem read_sdpa(const std::string& path);

struct SolverSettings {
  int max_iterations = 200;
  double tol_gap = 1e-9;
  double tol_feas = 1e-9;
  bool verbose = false;
};

/// Interior-point solve (Nesterov-Todd scaling, Mehrotra predictor-corrector).
SdpSolution solve(const SdpProblem& problem, const SolverSettings& settings = {});

}  // namespace pclpv
