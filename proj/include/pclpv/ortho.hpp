#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "pclpv/common.hpp"

namespace pclpv {

enum class DistributionFamily { Uniform, Gaussian };

/// Scalar random parameter: uniform on [lo, hi] or Gaussian(mean, stddev).
/// The Wiener-Askey pairing is uniform -> Legendre, Gaussian -> Hermite.
class ParameterDistribution {
 public:
  static ParameterDistribution uniform(double lo, double hi);
  static ParameterDistribution gaussian(double mean, double stddev);

  DistributionFamily family() const { return family_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mean() const { return mean_; }
  double stddev() const { return stddev_; }

  /// Raw parameter value -> standard variable (Legendre t in [-1,1],
  /// Hermite t = (x - mean)/stddev).
  double to_standard(double delta) const;
  double from_standard(double t) const;

  bool in_support(double delta) const;
  bool bounded() const { return family_ == DistributionFamily::Uniform; }

 private:
  ParameterDistribution() = default;
  DistributionFamily family_ = DistributionFamily::Uniform;
  double lo_ = -1.0, hi_ = 1.0;     // uniform
  double mean_ = 0.0, stddev_ = 1.0;  // gaussian
};

/// Gauss rule with probabilistic weights (Σ w_k = 1 against the density).
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  double expect(const std::function<double(double)>& g) const;
  Eigen::Index size() const { return nodes.size(); }
};

/// Number of quadrature nodes used to assemble non-polynomial expectations
/// for a basis of degree N.
int default_quadrature_order(int degree);

/// n-point Gauss rule for the distribution (Golub-Welsch on the Jacobi matrix).
QuadratureRule gauss_rule(const ParameterDistribution& dist, int n_nodes);

/// Composite rule for piecewise-smooth integrands: the support of a bounded
/// distribution straddling zero is split at zero into two Gauss panels of
/// n_nodes each, so |delta| factors do not degrade the convergence rate.
QuadratureRule split_gauss_rule(const ParameterDistribution& dist, int n_nodes);

/// Classically normalized orthogonal polynomials phi_0..phi_N for the
/// distribution (Legendre with P_i(1)=1, probabilists' Hermite), composed with
/// the affine map from the raw parameter domain. phi_0 == 1 and the squared
/// norms E[phi_i^2] are stored, never assumed to be one.
class OrthoBasis {
 public:
  OrthoBasis(ParameterDistribution dist, int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  const ParameterDistribution& distribution() const { return dist_; }
  const std::vector<double>& norms() const { return norms_; }
  double norm(int i) const { return norms_.at(i); }

  /// [phi_0(delta), ..., phi_N(delta)]; throws DomainError outside a bounded
  /// support.
  Eigen::VectorXd evaluate(double delta) const;

  /// Values up to an arbitrary degree (used for roots of phi_{N+1}).
  Eigen::VectorXd evaluate_to_degree(double delta, int degree) const;

 private:
  ParameterDistribution dist_;
  int degree_;
  std::vector<double> norms_;
};

/// Lagrange interpolants on the roots of phi_{N+1}; these are orthogonal in
/// L2 against the density and E[l_i] equals the i-th probabilistic Gauss
/// weight of the (N+1)-node rule.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(const OrthoBasis& basis);
  LagrangeBasis(ParameterDistribution dist, Eigen::VectorXd nodes, Eigen::VectorXd expectations);

  int size() const { return static_cast<int>(nodes_.size()); }
  int degree() const { return size() - 1; }
  const ParameterDistribution& distribution() const { return dist_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& node_expectations() const { return expectations_; }

  double evaluate_one(int i, double delta) const;
  Eigen::VectorXd evaluate(double delta) const;

 private:
  ParameterDistribution dist_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd expectations_;
};

/// E[l_i l_j g] computed with an independent quadrature of 2N+4 nodes.
/// When g is affine this equals 0 (i != j) or E[l_i] g(node_i) (i == j).
double lemma1_lhs(const LagrangeBasis& lagrange, const std::function<double(double)>& g, int i,
                  int j);

}  // namespace pclpv
