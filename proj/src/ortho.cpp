#include "pclpv/ortho.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace pclpv {

ParameterDistribution ParameterDistribution::uniform(double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("uniform distribution requires lo < hi");
  ParameterDistribution d;
  d.family_ = DistributionFamily::Uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  d.mean_ = 0.5 * (lo + hi);
  d.stddev_ = (hi - lo) / std::sqrt(12.0);
  return d;
}

ParameterDistribution ParameterDistribution::gaussian(double mean, double stddev) {
  if (!(stddev > 0.0)) throw ConfigError("gaussian distribution requires stddev > 0");
  ParameterDistribution d;
  d.family_ = DistributionFamily::Gaussian;
  d.mean_ = mean;
  d.stddev_ = stddev;
  d.lo_ = -std::numeric_limits<double>::infinity();
  d.hi_ = std::numeric_limits<double>::infinity();
  return d;
}

double ParameterDistribution::to_standard(double delta) const {
  if (family_ == DistributionFamily::Uniform)
    return (2.0 * delta - (lo_ + hi_)) / (hi_ - lo_);
  return (delta - mean_) / stddev_;
}

double ParameterDistribution::from_standard(double t) const {
  if (family_ == DistributionFamily::Uniform) return 0.5 * ((hi_ - lo_) * t + lo_ + hi_);
  return mean_ + stddev_ * t;
}

bool ParameterDistribution::in_support(double delta) const {
  if (family_ == DistributionFamily::Gaussian) return std::isfinite(delta);
  const double slack = 1e-12 * (1.0 + std::abs(lo_) + std::abs(hi_));
  return delta >= lo_ - slack && delta <= hi_ + slack;
}

double QuadratureRule::expect(const std::function<double(double)>& g) const {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < nodes.size(); ++k) acc += weights[k] * g(nodes[k]);
  return acc;
}

int default_quadrature_order(int degree) { return std::max(20, 2 * degree + 10); }

namespace {

// Values of the standard-domain basis up to `degree` via three-term
// recurrence: Legendre (i+1)P_{i+1} = (2i+1)t P_i - i P_{i-1},
// probabilists' Hermite He_{i+1} = t He_i - i He_{i-1}.
Eigen::VectorXd recurrence_values(DistributionFamily family, double t, int degree) {
  Eigen::VectorXd p(degree + 1);
  p[0] = 1.0;
  if (degree == 0) return p;
  p[1] = t;
  for (int i = 1; i < degree; ++i) {
    if (family == DistributionFamily::Uniform)
      p[i + 1] = ((2.0 * i + 1.0) * t * p[i] - i * p[i - 1]) / (i + 1.0);
    else
      p[i + 1] = t * p[i] - i * p[i - 1];
  }
  return p;
}

// Jacobi matrix of the standard probability measure (monic recurrence
// a_k = 0; b_k as below), eigen-decomposed for nodes and weights.
QuadratureRule golub_welsch(const ParameterDistribution& dist, int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    if (dist.family() == DistributionFamily::Uniform)
      sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    else
      sub[k - 1] = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub);
  if (es.info() != Eigen::Success) throw NumericalError("gauss_rule: Jacobi eigensolve failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = dist.from_standard(es.eigenvalues()[k]);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = v0 * v0;  // measure already normalized to 1
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_rule(const ParameterDistribution& dist, int n_nodes) {
  if (n_nodes < 1) throw InputError("gauss_rule: need at least one node");
  return golub_welsch(dist, n_nodes);
}

QuadratureRule split_gauss_rule(const ParameterDistribution& dist, int n_nodes) {
  if (!dist.bounded() || dist.lo() >= 0.0 || dist.hi() <= 0.0) return gauss_rule(dist, n_nodes);
  const double total = dist.hi() - dist.lo();
  const QuadratureRule base = gauss_rule(ParameterDistribution::uniform(-1.0, 1.0), n_nodes);
  QuadratureRule rule;
  rule.nodes.resize(2 * n_nodes);
  rule.weights.resize(2 * n_nodes);
  const double ends[2][2] = {{dist.lo(), 0.0}, {0.0, dist.hi()}};
  for (int s = 0; s < 2; ++s) {
    const double a = ends[s][0], b = ends[s][1];
    for (int k = 0; k < n_nodes; ++k) {
      rule.nodes[s * n_nodes + k] = 0.5 * (a + b) + 0.5 * (b - a) * base.nodes[k];
      rule.weights[s * n_nodes + k] = base.weights[k] * (b - a) / total;
    }
  }
  return rule;
}

OrthoBasis::OrthoBasis(ParameterDistribution dist, int degree) : dist_(dist), degree_(degree) {
  if (degree < 0) throw InputError("OrthoBasis: degree must be nonnegative");
  // (N+1)-node Gauss is exact for the degree-2N integrands phi_i^2.
  const QuadratureRule rule = gauss_rule(dist_, degree_ + 1);
  norms_.assign(degree_ + 1, 0.0);
  for (Eigen::Index k = 0; k < rule.size(); ++k) {
    const Eigen::VectorXd phi =
        recurrence_values(dist_.family(), dist_.to_standard(rule.nodes[k]), degree_);
    for (int i = 0; i <= degree_; ++i) norms_[i] += rule.weights[k] * phi[i] * phi[i];
  }
  for (int i = 0; i <= degree_; ++i)
    if (!(norms_[i] > 0.0)) throw NumericalError("OrthoBasis: nonpositive norm");
}

Eigen::VectorXd OrthoBasis::evaluate(double delta) const {
  return evaluate_to_degree(delta, degree_);
}

Eigen::VectorXd OrthoBasis::evaluate_to_degree(double delta, int degree) const {
  if (!dist_.in_support(delta))
    throw DomainError("basis evaluation outside support: delta = " + std::to_string(delta));
  return recurrence_values(dist_.family(), dist_.to_standard(delta), degree);
}

LagrangeBasis::LagrangeBasis(const OrthoBasis& basis) : dist_(basis.distribution()) {
  // Roots of phi_{N+1} = nodes of the (N+1)-point Gauss rule; the
  // probabilistic weights are exactly E[l_i].
  const QuadratureRule rule = gauss_rule(dist_, basis.degree() + 1);
  nodes_ = rule.nodes;
  expectations_ = rule.weights;
  for (int i = 1; i < size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw NumericalError("LagrangeBasis: nodes not distinct/ordered");
}

LagrangeBasis::LagrangeBasis(ParameterDistribution dist, Eigen::VectorXd nodes,
                             Eigen::VectorXd expectations)
    : dist_(dist), nodes_(std::move(nodes)), expectations_(std::move(expectations)) {
  if (nodes_.size() != expectations_.size() || nodes_.size() == 0)
    throw DimensionError("LagrangeBasis: nodes/expectations size mismatch");
}

double LagrangeBasis::evaluate_one(int i, double delta) const {
  if (i < 0 || i >= size()) throw InputError("LagrangeBasis: index out of range");
  double v = 1.0;
  for (int j = 0; j < size(); ++j) {
    if (j == i) continue;
    v *= (delta - nodes_[j]) / (nodes_[i] - nodes_[j]);
  }
  return v;
}

Eigen::VectorXd LagrangeBasis::evaluate(double delta) const {
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v[i] = evaluate_one(i, delta);
  return v;
}

double lemma1_lhs(const LagrangeBasis& lagrange, const std::function<double(double)>& g, int i,
                  int j) {
  const int n = lagrange.size();
  if (i < 0 || i >= n || j < 0 || j >= n) throw InputError("lemma1_lhs: index out of range");
  const QuadratureRule rule = gauss_rule(lagrange.distribution(), 2 * lagrange.degree() + 4);
  return rule.expect([&](double d) {
    return lagrange.evaluate_one(i, d) * lagrange.evaluate_one(j, d) * g(d);
  });
}

}  // namespace pclpv
