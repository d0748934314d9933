// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavy artifacts (the benchmark syntheses) are computed once
// and shared across criteria.
#include <chrono>
#include <cstdio>
#include <map>
#include <random>

#include "pclpv/bench.hpp"
#include "pclpv/validation.hpp"

using namespace pclpv;

#ifndef PCLPV_SOURCE_DIR
#define PCLPV_SOURCE_DIR "."
#endif

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, bool pass, const std::string& what, double seconds) {
  std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool check(bool cond, const char* label) {
  if (!cond) std::printf("       failed: %s\n", label);
  return cond;
}

double rel_dev(double value, double target) { return std::abs(value - target) / target; }

}  // namespace

int main() {
  const Config cfg = load_config(std::string(PCLPV_SOURCE_DIR) + "/configs/reference.json");
  const UncertainLinearSystem sys = missile_quasi_lpv(cfg.model);
  const SynthOptions options = options_from(cfg);

  // ---- criterion 1: LTI LMI gain vs the Riccati-iteration oracle ----------
  {
    Timer t;
    bool pass = true;
    {
      const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, -1.0);
      const Eigen::MatrixXd b = Eigen::MatrixXd::Ones(1, 1);
      const CostWeights c1{Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
      const auto res = synth_lti(a, b, c1);
      pass &= check(res.ok(), "scalar synthesis solved");
      if (res.ok()) {
        const Eigen::MatrixXd k_star = lqr_gain_oracle(a, b, c1.Q, c1.R);
        pass &= check((std::get<StaticGain>(*res.gain).K - k_star).norm() / k_star.norm() <= 1e-3,
                      "scalar gain within 1e-3 of the Riccati oracle");
      }
    }
    {
      Eigen::MatrixXd a(2, 2), b(2, 1);
      a << 0, 1, 0, 0;
      b << 0, 1;
      const CostWeights c2{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(1, 1)};
      const auto res = synth_lti(a, b, c2);
      pass &= check(res.ok(), "double integrator synthesis solved");
      if (res.ok()) {
        const Eigen::MatrixXd k_star = lqr_gain_oracle(a, b, c2.Q, c2.R);
        pass &= check((std::get<StaticGain>(*res.gain).K - k_star).norm() / k_star.norm() <= 1e-3,
                      "double integrator gain within 1e-3 of the Riccati oracle");
      }
    }
    pass &= check(t.seconds() < 5.0, "runtime < 5 s");
    report(1, pass, "LTI-LMI gain matches the Riccati oracle to 1e-3", t.seconds());
  }

  // ---- criterion 2: orthogonality, norms, quadrature exactness ------------
  {
    Timer t;
    const auto suite = run_validation_suites({"orthogonality"}, cfg.seed);
    bool pass = check(suite.size() == 1 && suite[0].pass,
                      "off-diagonals <= 1e-10, norms 1/(2i+1) within 1e-10, monomial exactness");
    pass &= check(t.seconds() < 5.0, "runtime < 5 s");
    report(2, pass, "orthogonality and quadrature suite", t.seconds());
  }

  // ---- criterion 3: Lagrange interpolant identities ------------------------
  {
    Timer t;
    const auto suite = run_validation_suites({"lemma1"}, cfg.seed);
    const bool pass = check(suite.size() == 1 && suite[0].pass,
                            "interpolant product identities within 1e-9 for N in 1..9, weights within 1e-12");
    report(3, pass, "Lagrange interpolant product and weight identities", t.seconds());
  }

  // ---- criterion 4: Proposition 1 and the Ybar dimension count ------------
  {
    Timer t;
    const auto suites = run_validation_suites({"prop1", "corollary1"}, cfg.seed);
    bool pass = true;
    for (const auto& s : suites) pass &= check(s.pass, s.name.c_str());
    report(4, pass, "Kronecker identity and Ybar free-parameter count", t.seconds());
  }

  // ---- criterion 5: Galerkin propagation vs Monte Carlo -------------------
  {
    Timer t;
    const auto suite = run_validation_suites({"galerkin_mc"}, cfg.seed);
    bool pass = check(suite.size() == 1 && suite[0].pass,
                      "mean and variance at t=1 within 1 percent of 1e5 samples");
    pass &= check(t.seconds() < 60.0, "runtime < 60 s");
    report(5, pass, "Galerkin propagation vs Monte Carlo", t.seconds());
  }

  // ---- shared syntheses for criteria 6-9 -----------------------------------
  Timer t_all;
  std::map<std::string, SynthResult> gains;
  std::map<std::string, BenchRecord> records;
  for (const auto& spec : default_benchmark_specs()) {
    gains.emplace(spec.label(), synthesize_controller(cfg, spec));
    BenchRecord rec;
    rec.spec = spec;
    const SynthResult& res = gains.at(spec.label());
    if (res.ok()) {
      rec.objective = res.objective;
      rec.sdp_residual = res.sdp_residual();
      rec.decay_residual = certification_decay_residual(cfg, spec, *res.gain);
      const SimResult sim = simulate_closed_loop(cfg.model, cfg.cost, *res.gain,
                                                 cfg.simulation.x0, cfg.simulation.t_final,
                                                 cfg.simulation.dt);
      rec.cost = sim.J;
      rec.diverged = sim.diverged();
      for (double p : {sys.distribution.lo(), sys.distribution.hi()}) {
        const Eigen::MatrixXd acl = sys.A(p) + sys.B(p) * eval_gain(*res.gain, p);
        rec.wc_abscissa.emplace_back(p, spectral_abscissa(acl));
      }
    }
    records.emplace(spec.label(), std::move(rec));
  }

  // ---- criterion 6: cost ordering over five interior initial conditions ----
  {
    Timer t;
    bool pass = check(cfg.simulation.x0_candidates.size() == 5,
                      "five initial conditions listed in the config");
    const auto& lti = gains.at("lti");
    const auto& lpv100 = gains.at("lpv-100");
    const auto& pc5 = gains.at("pclpv-5");
    const auto& sc12 = gains.at("sclpv-12");
    for (const auto& x0v : cfg.simulation.x0_candidates) {
      const Eigen::Vector2d x0(x0v[0], x0v[1]);
      auto cost_of = [&](const SynthResult& r) {
        return simulate_closed_loop(cfg.model, cfg.cost, *r.gain, x0, cfg.simulation.t_final,
                                    cfg.simulation.dt)
            .J;
      };
      const double jl = cost_of(lti), j100 = cost_of(lpv100), j5 = cost_of(pc5),
                   js = cost_of(sc12);
      std::printf("       x0=(%g,%g): LTI %.3f > LPV100 %.3f > pcLPV5 %.3f ~ scLPV12 %.3f\n",
                  x0[0], x0[1], jl, j100, j5, js);
      pass &= check(jl > j100 && j100 > j5, "J(LTI) > J(LPV100) > J(pcLPV5)");
      pass &= check(std::abs(j5 - js) <= 0.01 * std::max(j5, js),
                    "pcLPV5 and scLPV12 within 1 percent");
    }
    pass &= check(t.seconds() < 900.0, "runtime < 15 min");
    report(6, pass, "benchmark cost ordering over five initial conditions", t.seconds());
  }

  // ---- criterion 7: reproduction of the reference cost table ---------------
  {
    Timer t;
    const std::map<std::string, double> targets = {{"lti", 209.3011},
                                                   {"lpv-100", 169.3382},
                                                   {"pclpv-5", 103.9018},
                                                   {"sclpv-5", 104.5838},
                                                   {"sclpv-12", 103.9075}};
    bool pass = true;
    for (const auto& [label, target] : targets) {
      const BenchRecord& rec = records.at(label);
      const double dev = rel_dev(rec.cost, target);
      std::printf("       %-9s cost %9.4f vs %9.4f (%+5.1f%%)\n", label.c_str(), rec.cost,
                  target, 100.0 * (rec.cost / target - 1.0));
      pass &= check(std::isfinite(rec.cost) && dev <= 0.15, (label + " within 15%").c_str());
    }
    pass &= check(records.at("lpv-2").diverged,
                  "2-sample LPV row reproduces the non-convergence flag");
    report(7, pass, "cost table reproduced within 15%, divergence footnote reproduced",
           t.seconds());
  }

  // ---- criterion 8: certification of every accepted gain -------------------
  {
    Timer t;
    bool pass = true;
    for (const auto& [label, rec] : records) {
      if (!gains.at(label).ok()) continue;
      pass &= check(rec.sdp_residual <= 1e-6, (label + ": SDP residual <= 1e-6").c_str());
      pass &= check(rec.decay_residual <= 1e-5,
                    (label + ": expected decay residual <= 1e-5").c_str());
      if (rec.diverged) continue;  // non-stabilizing rows are flagged, not certified
      for (const auto& [p, absc] : rec.wc_abscissa)
        pass &= check(absc < 0.0, (label + ": closed loop stable at the envelope edge").c_str());
      std::printf("       %-9s sdp %9.2e decay %9.2e abscissa(%g) %8.4f abscissa(%g) %8.4f\n",
                  label.c_str(), rec.sdp_residual, rec.decay_residual, rec.wc_abscissa[0].first,
                  rec.wc_abscissa[0].second, rec.wc_abscissa[1].first,
                  rec.wc_abscissa[1].second);
    }
    report(8, pass, "SDP residuals, decay certificates, worst-case stability", t.seconds());
  }

  // ---- criterion 9: convergence trend over the pc degrees ------------------
  {
    Timer t;
    const double j3 = records.at("pclpv-3").cost, j4 = records.at("pclpv-4").cost,
                 j5 = records.at("pclpv-5").cost;
    const double o3 = records.at("pclpv-3").objective, o4 = records.at("pclpv-4").objective,
                 o5 = records.at("pclpv-5").objective;
    std::printf("       simulated cost: %.4f -> %.4f -> %.4f\n", j3, j4, j5);
    std::printf("       objective:      %.4f -> %.4f -> %.4f\n", o3, o4, o5);
    bool pass = check(j4 <= j3 + 1e-3 && j5 <= j4 + 1e-3,
                      "simulated cost non-increasing within 1e-3");
    const bool obj_trend = o4 >= o3 - 1e-3 && o5 >= o4 - 1e-3;
    if (!obj_trend) {
      std::printf(
          "       note: the objective is not monotone across degrees. Raising the degree both\n"
          "       enriches the gain parameterization and adds test directions to the projected\n"
          "       constraint, and on this plant (even in the scheduling parameter) the odd\n"
          "       degrees add constraints without useful parameters; the zero-padded degree-4\n"
          "       optimum violates the degree-5 constraint block (max eig +1.8e-2), so the\n"
          "       optimal values genuinely dip. The simulated-cost trend above is the\n"
          "       reproducible part of the reference trend.\n");
    }
    pass &= check(obj_trend, "objective non-decreasing within 1e-3");
    report(9, pass, "pc degree 3/4/5 convergence trend", t.seconds());
  }

  std::printf("%s: %d criterion(s) failed\n", g_failures ? "RESULT: FAIL" : "RESULT: PASS",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
