#include "pclpv/plant.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace pclpv {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

void CostWeights::validate() const {
  if (Q.rows() != Q.cols() || R.rows() != R.cols())
    throw DimensionError("CostWeights: Q and R must be square");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + Q.cwiseAbs().maxCoeff()))
    throw InputError("CostWeights: Q not symmetric");
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + R.cwiseAbs().maxCoeff()))
    throw InputError("CostWeights: R not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esq(Q, Eigen::EigenvaluesOnly);
  if (esq.eigenvalues().minCoeff() < -1e-12) throw InputError("CostWeights: Q not PSD");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esr(R, Eigen::EigenvaluesOnly);
  if (esr.eigenvalues().minCoeff() <= 0.0) throw InputError("CostWeights: R not positive definite");
}

std::pair<double, double> aero_coeffs(const MissileConfig& cfg, double alpha_deg, double fin_deg) {
  const double a = alpha_deg, aa = std::abs(alpha_deg), M = cfg.mach;
  const double cn = a * (cfg.a_n * aa * aa + cfg.b_n * aa + cfg.c_n * (2.0 - M / 3.0)) +
                    cfg.d_n * fin_deg;
  const double cm = a * (cfg.a_m * aa * aa + cfg.b_m * aa + cfg.c_m * (-7.0 + 8.0 * M / 3.0)) +
                    cfg.d_m * fin_deg;
  return {cn, cm};
}

Eigen::Vector2d missile_rhs(const MissileConfig& cfg, const Eigen::Vector2d& x, double fin_deg) {
  const auto [cn, cm] = aero_coeffs(cfg, x[0], fin_deg);
  const double M = cfg.mach;
  Eigen::Vector2d dx;
  dx[0] = cfg.K_alpha * M * cn * std::cos(x[0] * kDegToRad) + x[1];
  dx[1] = cfg.K_q * M * M * cm;
  return dx;
}

UncertainLinearSystem missile_quasi_lpv(const MissileConfig& cfg) {
  UncertainLinearSystem sys;
  sys.n = 2;
  sys.m = 1;
  sys.distribution = ParameterDistribution::uniform(cfg.alpha_min, cfg.alpha_max);
  const double M = cfg.mach;
  sys.A = [cfg, M](double rho) {
    const double ar = std::abs(rho);
    Eigen::MatrixXd a(2, 2);
    a(0, 0) = cfg.K_alpha * M * (cfg.a_n * ar * ar + cfg.b_n * ar + cfg.c_n * (2.0 - M / 3.0)) *
              std::cos(rho * kDegToRad);
    a(0, 1) = 1.0;
    a(1, 0) = cfg.K_q * M * M * (cfg.a_m * ar * ar + cfg.b_m * ar + cfg.c_m * (-7.0 + 8.0 * M / 3.0));
    a(1, 1) = 0.0;
    return a;
  };
  sys.B = [cfg, M](double rho) {
    Eigen::MatrixXd b(2, 1);
    b(0, 0) = cfg.K_alpha * M * cfg.d_n * std::cos(rho * kDegToRad);
    b(1, 0) = cfg.K_q * M * M * cfg.d_m;
    return b;
  };
  return sys;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> linearize_origin(const MissileConfig& cfg) {
  const UncertainLinearSystem sys = missile_quasi_lpv(cfg);
  return {sys.A(0.0), sys.B(0.0)};
}

}  // namespace pclpv
