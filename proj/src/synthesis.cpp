#include "pclpv/synthesis.hpp"

#include <set>

namespace pclpv {

namespace {

std::vector<double> effective_wc_points(const UncertainLinearSystem& sys,
                                        const SynthOptions& options) {
  if (!options.wc_points.empty()) return options.wc_points;
  if (sys.distribution.bounded()) return {sys.distribution.lo(), sys.distribution.hi()};
  return {};
}

// sym(Y Aᵀ + Wᵀ Bᵀ) for affine Y (n x n) and W (m x n).
AffineMatrix lyap_m11(const AffineMatrix& y, const AffineMatrix& w, const Eigen::MatrixXd& A,
                      const Eigen::MatrixXd& B) {
  AffineMatrix m11 = y.left_right({}, A.transpose());
  m11 += w.transposed().left_right({}, B.transpose());
  return m11.symmetrized();
}

SynthResult finish_solve(SdpProblem problem, const SolverSettings& settings,
                         const std::function<Gain(const Eigen::VectorXd&)>& extract) {
  SynthResult res;
  res.scalar_variables = problem.num_variables();
  res.solution = solve(problem, settings);
  res.problem = std::move(problem);
  if (res.solution.status == SdpSolution::Status::Optimal) {
    res.gain = extract(res.solution.values);
    res.objective = res.solution.objective;
  } else {
    res.failure = std::string("synthesis ") + to_string(res.solution.status) + ": " +
                  res.solution.message;
  }
  return res;
}

}  // namespace

int pc_ybar_dimension(int n, int degree) {
  return n * (n + 1) * (degree + 1) * (degree + 2) / 4;
}

std::vector<double> uniform_samples(double lo, double hi, int count) {
  if (count < 2) throw InputError("uniform_samples: need at least two samples");
  std::vector<double> s(count);
  for (int k = 0; k < count; ++k) s[k] = lo + (hi - lo) * k / (count - 1);
  return s;
}

void add_worst_case(SdpProblem& problem, const UncertainLinearSystem& sys,
                    const std::function<AffineMatrix(double)>& y_at,
                    const std::function<AffineMatrix(double)>& w_at,
                    const std::vector<double>& points, double epsilon_stab) {
  for (double p : points) {
    AffineMatrix expr = y_at(p).left_right(sys.A(p), {});
    expr += w_at(p).left_right(sys.B(p), {});
    expr = expr.symmetrized();
    expr.add_constant(epsilon_stab * Eigen::MatrixXd::Identity(sys.n, sys.n));
    problem.add_block(
        LmiBlock::negative_semidefinite("wc(" + std::to_string(p) + ")", expr));
  }
}

LtiAssembly assemble_lti(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const CostWeights& cost, const SynthOptions& options) {
  cost.validate();
  const int n = static_cast<int>(A.rows()), m = static_cast<int>(B.cols());
  if (A.cols() != n || B.rows() != n || cost.Q.rows() != n || cost.R.rows() != m)
    throw DimensionError("synth_lti: inconsistent dimensions");
  SdpProblem problem;
  SymmetricVar Y(problem, "Y", n);
  RectVar W(problem, "W", m, n);
  for (int i = 0; i < n; ++i) problem.add_objective(Y.var(i, i), 1.0);
  problem.add_block(schur_wrap("lyapunov", lyap_m11(Y.expr(), W.expr(), A, B),
                               {{Y.expr(), principal_sqrt(cost.Q)},
                                {W.expr(), principal_sqrt(cost.R)}}));
  AffineMatrix pos = Y.expr();
  pos.add_constant(-options.epsilon_psd * Eigen::MatrixXd::Identity(n, n));
  problem.add_block(LmiBlock::positive_semidefinite("Y_pos", pos));
  return {std::move(problem), Y, W};
}

SynthResult synth_lti(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const CostWeights& cost,
                      const SynthOptions& options) {
  LtiAssembly a = assemble_lti(A, B, cost, options);
  SymmetricVar Y = a.Y;
  RectVar W = a.W;
  SynthResult res = finish_solve(std::move(a.problem), options.solver, [&](const auto& y) {
    const Eigen::MatrixXd yv = Y.value(y);
    return StaticGain{W.value(y) * yv.inverse(), yv};
  });
  if (res.ok()) {
    const Eigen::MatrixXd K = std::get<StaticGain>(*res.gain).K;
    if (spectral_abscissa(A + B * K) >= 0.0) {
      res.gain.reset();
      res.failure = "stabilizability failure: optimizer returned a non-Hurwitz closed loop "
                    "(system has no stabilizing feedback at this cost)";
    }
  } else if (res.solution.status == SdpSolution::Status::Infeasible) {
    res.failure = "stabilizability failure: LMI infeasible";
  }
  return res;
}

SynthResult synth_lpv_sampled(const UncertainLinearSystem& sys, const CostWeights& cost,
                              const std::vector<double>& samples, const SynthOptions& options) {
  cost.validate();
  if (samples.size() < 2) throw InputError("synth_lpv_sampled: need at least two samples");
  std::set<double> uniq(samples.begin(), samples.end());
  if (uniq.size() != samples.size())
    throw InputError("synth_lpv_sampled: duplicate samples rejected");
  for (double s : samples)
    if (!sys.distribution.in_support(s))
      throw DomainError("synth_lpv_sampled: sample outside support: " + std::to_string(s));

  const int n = sys.n, m = sys.m;
  SdpProblem problem;
  SymmetricVar Y0(problem, "Y0", n), Y1(problem, "Y1", n);
  RectVar W0(problem, "W0", m, n), W1(problem, "W1", m, n);
  for (int i = 0; i < n; ++i) {
    problem.add_objective(Y0.var(i, i), 1.0);
    problem.add_objective(Y1.var(i, i), 1.0);
  }
  const Eigen::MatrixXd sq = principal_sqrt(cost.Q), sr = principal_sqrt(cost.R);
  for (double rho : samples) {
    AffineMatrix y = Y0.expr();
    y += Y1.expr().scaled(rho);
    AffineMatrix w = W0.expr();
    w += W1.expr().scaled(rho);
    problem.add_block(schur_wrap("sample(" + std::to_string(rho) + ")",
                                 lyap_m11(y, w, sys.A(rho), sys.B(rho)), {{y, sq}, {w, sr}}));
    AffineMatrix pos = y;
    pos.add_constant(-options.epsilon_psd * Eigen::MatrixXd::Identity(n, n));
    problem.add_block(
        LmiBlock::positive_semidefinite("Y_pos(" + std::to_string(rho) + ")", pos));
  }
  return finish_solve(std::move(problem), options.solver, [&](const auto& y) {
    return AffineGain{Y0.value(y), Y1.value(y), W0.value(y), W1.value(y)};
  });
}

PcAssembly assemble_pclpv(const UncertainLinearSystem& sys, const CostWeights& cost,
                          const OrthoBasis& basis, const SynthOptions& options) {
  cost.validate();
  const int n = sys.n, m = sys.m, N = basis.degree(), terms = N + 1;
  const PsiOrdering ordering(N);
  const int L = ordering.length();
  const int order = options.quadrature_order > 0 ? options.quadrature_order
                                                 : default_quadrature_order(N);
  const QuadratureRule rule = split_gauss_rule(sys.distribution, order);

  PcAssembly a;
  a.tensors = build_tensors(sys, basis, cost.Q, cost.R, rule);
  for (int k = 0; k < L; ++k) {
    const auto [i, j] = ordering.pair_at(k);
    a.Yb.emplace_back(a.problem, "Yb(" + std::to_string(i) + "," + std::to_string(j) + ")", n);
  }
  for (int i = 0; i < terms; ++i) a.W.emplace_back(a.problem, "W" + std::to_string(i), m, n);
  for (const auto& v : a.Yb) a.ybar_scalar_count += v.count();

  // Objective: tr Σ E[phi_i^2] Ybar_ii.
  for (int k = 0; k < L; ++k) {
    const auto [i, j] = ordering.pair_at(k);
    if (i != j) continue;
    for (int d = 0; d < n; ++d) a.problem.add_objective(a.Yb[k].var(d, d), basis.norm(i));
  }

  // Stacked variable maps V_Y (Ln x n) and V_W ((N+1)m x n).
  AffineMatrix vy(L * n, n);
  for (int k = 0; k < L; ++k) {
    const AffineMatrix blk = a.Yb[k].expr();
    for (const auto& [v, c] : blk.terms()) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(L * n, n);
      e.middleRows(k * n, n) = c;
      vy.add_term(v, e);
    }
  }
  AffineMatrix vw(terms * m, n);
  for (int i = 0; i < terms; ++i) {
    const AffineMatrix blk = a.W[i].expr();
    for (const auto& [v, c] : blk.terms()) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(terms * m, n);
      e.middleRows(i * m, m) = c;
      vw.add_term(v, e);
    }
  }
  const AffineMatrix vy_lift = vy.kron_identity_lift(terms);
  const AffineMatrix vw_lift = vw.kron_identity_lift(terms);

  AffineMatrix m11 = vy_lift.transposed().left_right({}, a.tensors.M1);
  m11 += vw_lift.transposed().left_right({}, a.tensors.M2);
  m11 = m11.symmetrized();
  a.problem.add_block(
      schur_wrap("galerkin", m11, {{vy_lift, a.tensors.factor3}, {vw_lift, a.tensors.factor4}}));

  // Full Ybar ⪰ eps I (SOS positivity).
  AffineMatrix ybar(terms * n, terms * n);
  for (int k = 0; k < L; ++k) {
    const auto [i, j] = ordering.pair_at(k);
    const AffineMatrix blk = a.Yb[k].expr();
    for (const auto& [v, c] : blk.terms()) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(terms * n, terms * n);
      e.block(i * n, j * n, n, n) = c;
      if (i != j) e.block(j * n, i * n, n, n) = c.transpose();
      ybar.add_term(v, e);
    }
  }
  AffineMatrix pos = ybar;
  pos.add_constant(-options.epsilon_psd * Eigen::MatrixXd::Identity(terms * n, terms * n));
  a.problem.add_block(LmiBlock::positive_semidefinite("Ybar_pos", pos));

  auto y_at = [&, ybar](double delta) {
    const Eigen::MatrixXd phin = kron(basis.evaluate(delta), Eigen::MatrixXd::Identity(n, n));
    return ybar.left_right(phin.transpose(), phin);
  };
  auto w_at = [&](double delta) {
    const Eigen::VectorXd phi = basis.evaluate(delta);
    AffineMatrix w(m, n);
    for (int i = 0; i < terms; ++i) w += a.W[i].expr().scaled(phi[i]);
    return w;
  };
  add_worst_case(a.problem, sys, y_at, w_at, effective_wc_points(sys, options),
                 options.epsilon_stab);
  return a;
}

SynthResult synth_pclpv(const UncertainLinearSystem& sys, const CostWeights& cost,
                        const OrthoBasis& basis, const SynthOptions& options) {
  PcAssembly a = assemble_pclpv(sys, cost, basis, options);
  const int n = sys.n, terms = basis.size();
  const PsiOrdering ordering(basis.degree());
  std::vector<SymmetricVar> Yb = a.Yb;
  std::vector<RectVar> W = a.W;
  return finish_solve(std::move(a.problem), options.solver, [&](const auto& y) {
    PcGain g{basis, Eigen::MatrixXd::Zero(terms * n, terms * n), {}};
    for (int k = 0; k < ordering.length(); ++k) {
      const auto [i, j] = ordering.pair_at(k);
      const Eigen::MatrixXd blk = Yb[k].value(y);
      g.Ybar.block(i * n, j * n, n, n) = blk;
      g.Ybar.block(j * n, i * n, n, n) = blk.transpose();
    }
    for (const auto& w : W) g.W.push_back(w.value(y));
    return g;
  });
}

SynthResult synth_sclpv(const UncertainLinearSystem& sys, const CostWeights& cost,
                        const LagrangeBasis& lagrange, const SynthOptions& options) {
  cost.validate();
  const int n = sys.n, m = sys.m, terms = lagrange.size();
  SdpProblem problem;
  std::vector<SymmetricVar> Ytt;
  std::vector<RectVar> Wt;
  for (int i = 0; i < terms; ++i) {
    Ytt.emplace_back(problem, "Yt" + std::to_string(i), n);
    Wt.emplace_back(problem, "Wt" + std::to_string(i), m, n);
  }
  for (int i = 0; i < terms; ++i) {
    const double wi = lagrange.node_expectations()[i];
    for (int d = 0; d < n; ++d) problem.add_objective(Ytt[i].var(d, d), wi);
  }
  for (int i = 0; i < terms; ++i) {
    const double node = lagrange.nodes()[i];
    const double wi = lagrange.node_expectations()[i];
    // Node LMI with every term weighted by E[l_i]; Schur factors carry
    // sqrt(E[l_i] Q) and sqrt(E[l_i] R).
    AffineMatrix m11 = lyap_m11(Ytt[i].expr(), Wt[i].expr(), sys.A(node), sys.B(node)).scaled(wi);
    problem.add_block(schur_wrap("node(" + std::to_string(i) + ")", m11,
                                 {{Ytt[i].expr(), principal_sqrt(wi * cost.Q)},
                                  {Wt[i].expr(), principal_sqrt(wi * cost.R)}}));
    AffineMatrix pos = Ytt[i].expr();
    pos.add_constant(-options.epsilon_psd * Eigen::MatrixXd::Identity(n, n));
    problem.add_block(
        LmiBlock::positive_semidefinite("Yt_pos(" + std::to_string(i) + ")", pos));
  }
  // Worst-case blocks constrain Y and W exactly as the gain evaluates them:
  // the Lagrange interpolants of the node blocks.
  auto y_at = [&](double delta) {
    const Eigen::VectorXd l = lagrange.evaluate(delta);
    AffineMatrix y(n, n);
    for (int i = 0; i < terms; ++i) y += Ytt[i].expr().scaled(l[i]);
    return y;
  };
  auto w_at = [&](double delta) {
    const Eigen::VectorXd l = lagrange.evaluate(delta);
    AffineMatrix w(m, n);
    for (int i = 0; i < terms; ++i) w += Wt[i].expr().scaled(l[i]);
    return w;
  };
  add_worst_case(problem, sys, y_at, w_at, effective_wc_points(sys, options),
                 options.epsilon_stab);

  SynthResult res = finish_solve(std::move(problem), options.solver, [&](const auto& y) {
    ScGain g{lagrange, {}, {}};
    for (int i = 0; i < terms; ++i) {
      g.Ytt.push_back(Ytt[i].value(y));
      g.Wt.push_back(Wt[i].value(y));
    }
    return g;
  });
  if (!res.ok() && res.solution.status == SdpSolution::Status::Infeasible)
    res.failure += " (one or more node LMIs infeasible; nodes at " +
                   std::to_string(lagrange.nodes()[0]) + " .. " +
                   std::to_string(lagrange.nodes()[terms - 1]) + ")";
  return res;
}

double expected_decay_residual(const Gain& gain, const UncertainLinearSystem& sys,
                               const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                               const OrthoBasis& basis, const QuadratureRule& rule) {
  // The decay form S = sym((A+BK)ᵀP) + Q + KᵀRK with P = Y⁻¹ is certified by
  // the synthesis on the subspace x = Y(delta) Phi_nᵀ z, so it is projected
  // through that congruence: Y S Y = sym((A+BK)Y) + Y(Q + KᵀRK)Y, which
  // avoids the inverse entirely.
  const int n = sys.n, terms = basis.size();
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(n * terms, n * terms);
  for (Eigen::Index k = 0; k < rule.size(); ++k) {
    const double delta = rule.nodes[k];
    const Eigen::MatrixXd K = eval_gain(gain, delta);
    const Eigen::MatrixXd Y = gain_certificate(gain, delta);
    const Eigen::MatrixXd acl = sys.A(delta) + sys.B(delta) * K;
    const Eigen::MatrixXd ysy =
        acl * Y + Y * acl.transpose() + Y * (Q + K.transpose() * R * K) * Y;
    const Eigen::VectorXd phi = basis.evaluate(delta);
    proj += rule.weights[k] * kron(phi * phi.transpose(), ysy);
  }
  return max_eigenvalue(proj);
}

}  // namespace pclpv
