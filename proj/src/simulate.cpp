#include "pclpv/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace pclpv {

namespace {

constexpr double kBlowupNorm = 1e8;

double clamp_to_support(double v, const ParameterDistribution& d) {
  if (!d.bounded()) return v;
  return std::min(std::max(v, d.lo()), d.hi());
}

}  // namespace

SimResult simulate_closed_loop(const MissileConfig& cfg, const CostWeights& cost,
                               const Gain& gain, const Eigen::Vector2d& x0, double t_final,
                               double dt) {
  if (!(dt > 0.0)) throw InputError("simulate_closed_loop: dt must be positive");
  if (!x0.allFinite()) throw InputError("simulate_closed_loop: x0 must be finite");
  if (gain_state_dim(gain) != 2 || gain_input_dim(gain) != 1)
    throw DimensionError("simulate_closed_loop: gain dimensions do not match the plant");
  const ParameterDistribution support =
      ParameterDistribution::uniform(cfg.alpha_min, cfg.alpha_max);

  const int steps = static_cast<int>(std::llround(t_final / dt));
  SimResult r;
  r.t.resize(steps + 1);
  r.x.resize(steps + 1, 2);
  r.u.resize(steps + 1, 1);
  r.running_cost.resize(steps + 1);

  auto control = [&](const Eigen::Vector2d& x) -> double {
    const Eigen::MatrixXd K = eval_gain(gain, clamp_to_support(x[0], support));
    return (K * x)(0, 0);
  };
  auto rhs = [&](const Eigen::Vector2d& x) -> Eigen::Vector2d {
    return missile_rhs(cfg, x, control(x));
  };

  Eigen::Vector2d x = x0;
  int last = steps;
  for (int k = 0; k <= steps; ++k) {
    r.t[k] = k * dt;
    r.x.row(k) = x.transpose();
    double uk;
    try {
      uk = control(x);
    } catch (const NumericalError&) {
      // Singular Y(delta) along the trajectory: report divergence, keep the
      // cost computed so far.
      r.blowup = true;
      last = k;
      r.u(k, 0) = 0.0;
      r.running_cost[k] = (x.transpose() * cost.Q * x)(0, 0);
      break;
    }
    r.u(k, 0) = uk;
    r.running_cost[k] = (x.transpose() * cost.Q * x)(0, 0) + uk * uk * cost.R(0, 0);
    if (k == steps) break;
    const Eigen::Vector2d k1 = rhs(x);
    const Eigen::Vector2d k2 = rhs(x + 0.5 * dt * k1);
    const Eigen::Vector2d k3 = rhs(x + 0.5 * dt * k2);
    const Eigen::Vector2d k4 = rhs(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.norm() > kBlowupNorm) {
      r.blowup = true;
      last = k + 1;
      r.t[last] = last * dt;
      r.x.row(last) = x.allFinite() ? x.transpose() : Eigen::RowVector2d(kBlowupNorm, kBlowupNorm);
      r.u(last, 0) = 0.0;
      r.running_cost[last] = r.running_cost[k];
      break;
    }
  }

  r.t.conservativeResize(last + 1);
  r.x.conservativeResize(last + 1, 2);
  r.u.conservativeResize(last + 1, 1);
  r.running_cost.conservativeResize(last + 1);

  for (int k = 0; k < last; ++k)
    r.J += 0.5 * dt * (r.running_cost[k] + r.running_cost[k + 1]);

  const double conv_tol = 1e-2 * std::max(1.0, x0.lpNorm<Eigen::Infinity>());
  r.converged = !r.blowup && r.x.row(last).lpNorm<Eigen::Infinity>() <= conv_tol;
  return r;
}

double cost_to_go(const SimResult& result) { return result.J; }

void write_trajectory_csv(const SimResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_trajectory_csv: cannot open " + path);
  out << "t,alpha_deg,q_degps,deltafin_deg,running_cost\n";
  char buf[256];
  for (Eigen::Index k = 0; k < result.t.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n", result.t[k],
                  result.x(k, 0), result.x(k, 1), result.u(k, 0), result.running_cost[k]);
    out << buf;
  }
}

GalerkinValidation validate_galerkin(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                                     const Eigen::VectorXd& x0, double t_final, int n_mc,
                                     std::uint64_t seed, double dt) {
  const int n = sys.n, terms = basis.size();
  if (x0.size() != n) throw DimensionError("validate_galerkin: x0 dimension mismatch");

  const QuadratureRule rule =
      split_gauss_rule(sys.distribution, default_quadrature_order(basis.degree()));
  const Eigen::MatrixXd a_pc = project_dynamics(sys, basis, rule);

  auto rk4_linear = [&](const Eigen::MatrixXd& a, Eigen::VectorXd x) {
    const int steps = static_cast<int>(std::llround(t_final / dt));
    for (int k = 0; k < steps; ++k) {
      const Eigen::VectorXd k1 = a * x;
      const Eigen::VectorXd k2 = a * (x + 0.5 * dt * k1);
      const Eigen::VectorXd k3 = a * (x + 0.5 * dt * k2);
      const Eigen::VectorXd k4 = a * (x + dt * k3);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
  };

  // Deterministic x0: only mode 0 is populated.
  Eigen::VectorXd xpc = Eigen::VectorXd::Zero(n * terms);
  xpc.head(n) = x0;
  xpc = rk4_linear(a_pc, xpc);

  GalerkinValidation v;
  v.pc_mean = xpc.head(n);
  v.pc_var = Eigen::VectorXd::Zero(n);
  for (int i = 1; i < terms; ++i)
    v.pc_var += basis.norm(i) * xpc.segment(i * n, n).cwiseAbs2();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&]() {
    if (sys.distribution.bounded())
      return sys.distribution.lo() + (sys.distribution.hi() - sys.distribution.lo()) * unif(rng);
    return sys.distribution.mean() + sys.distribution.stddev() * normal(rng);
  };

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n), acc2 = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < n_mc; ++s) {
    const Eigen::VectorXd xs = rk4_linear(sys.A(draw()), x0);
    acc += xs;
    acc2 += xs.cwiseAbs2();
  }
  v.mc_mean = acc / n_mc;
  v.mc_var = acc2 / n_mc - v.mc_mean.cwiseAbs2();

  v.mean_rel_err = (v.pc_mean - v.mc_mean).norm() / std::max(v.mc_mean.norm(), 1e-300);
  v.var_rel_err = (v.pc_var - v.mc_var).norm() / std::max(v.mc_var.norm(), 1e-300);
  return v;
}

}  // namespace pclpv
