#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pclpv/galerkin.hpp"
#include "pclpv/gains.hpp"
#include "pclpv/plant.hpp"
#include "pclpv/sdp.hpp"

namespace pclpv {

struct SynthOptions {
  int quadrature_order = 0;  // 0 -> default_quadrature_order(degree)
  double epsilon_psd = 1e-6;
  double epsilon_stab = 1e-6;
  std::vector<double> wc_points;  // empty -> support endpoints
  SolverSettings solver;
};

struct SynthResult {
  std::optional<Gain> gain;  // present iff solved
  double objective = 0.0;
  SdpSolution solution;
  SdpProblem problem;  // kept for residual certification
  int scalar_variables = 0;
  std::string failure;  // human-readable diagnosis when !ok()

  bool ok() const { return gain.has_value(); }
  double sdp_residual() const {
    return ok() ? residual(problem, solution.values) : std::numeric_limits<double>::quiet_NaN();
  }
};

/// Deterministic LQR baseline via the 3x3-block LMI (max tr Y); the returned
/// closed loop A + BK is verified Hurwitz.
SynthResult synth_lti(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const CostWeights& cost,
                      const SynthOptions& options = {});

/// Classical sampled-parameter LPV design with affine Y(rho), W(rho); the
/// extreme-point program is recovered for samples {lo, hi}.
SynthResult synth_lpv_sampled(const UncertainLinearSystem& sys, const CostWeights& cost,
                              const std::vector<double>& samples,
                              const SynthOptions& options = {});

/// Endpoint-inclusive uniform grid used as the default sample placement.
std::vector<double> uniform_samples(double lo, double hi, int count);

/// Galerkin polynomial-chaos synthesis: single big LMI over the SOS-
/// parameterized Ybar and the W_i, plus Ybar ⪰ eps I and worst-case blocks.
SynthResult synth_pclpv(const UncertainLinearSystem& sys, const CostWeights& cost,
                        const OrthoBasis& basis, const SynthOptions& options = {});

/// Stochastic collocation synthesis: N+1 independent node LMIs weighted by
/// E[l_i], plus node positivity and worst-case blocks.
SynthResult synth_sclpv(const UncertainLinearSystem& sys, const CostWeights& cost,
                        const LagrangeBasis& lagrange, const SynthOptions& options = {});

/// Appends sym(A(p) Y(p) + B(p) W(p)) ⪯ -eps I for each point p, with Y/W
/// the affine expressions of the surrounding synthesis.
void add_worst_case(SdpProblem& problem, const UncertainLinearSystem& sys,
                    const std::function<AffineMatrix(double)>& y_at,
                    const std::function<AffineMatrix(double)>& w_at,
                    const std::vector<double>& points, double epsilon_stab);

/// Largest eigenvalue of the Galerkin projection of the expected-decay form
/// sym((A+BK)ᵀP) + Q + KᵀRK, P(delta) = Y(delta)⁻¹, onto span{phi_i phi_j},
/// taken through the congruence x = Y(delta) Phi_nᵀ z on which the synthesis
/// certifies it; at most ~0 certifies the decay condition on the truncated
/// subspace.
double expected_decay_residual(const Gain& gain, const UncertainLinearSystem& sys,
                               const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                               const OrthoBasis& basis, const QuadratureRule& rule);

/// Number of free scalars in the SOS block parameterization of Ybar:
/// n(n+1)(N+1)(N+2)/4.
int pc_ybar_dimension(int n, int degree);

/// Problem assemblies exposed for certification and property tests.
struct PcAssembly {
  SdpProblem problem;
  std::vector<SymmetricVar> Yb;  // per psi pair, ordering of PsiOrdering
  std::vector<RectVar> W;
  GalerkinTensors tensors;
  int ybar_scalar_count = 0;
};
PcAssembly assemble_pclpv(const UncertainLinearSystem& sys, const CostWeights& cost,
                          const OrthoBasis& basis, const SynthOptions& options = {});

struct LtiAssembly {
  SdpProblem problem;
  SymmetricVar Y;
  RectVar W;
};
LtiAssembly assemble_lti(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const CostWeights& cost, const SynthOptions& options = {});

}  // namespace pclpv
