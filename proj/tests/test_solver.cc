#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "hba/directions.hpp"
#include "hba/geometry.hpp"
#include "hba/solver.hpp"
#include "hba/stepsize.hpp"
#include "hba/trace_io.hpp"
#include "oracle_values.hpp"
#include "support/instances.hpp"

namespace hba {
namespace {

using testing::Instance;

SolverConfig fixed_config(const Instance& inst, double eps = 1e-6, int iters = 5000) {
  SolverConfig cfg;
  cfg.mu = inst.mu;
  cfg.L = inst.L;
  cfg.epsilon = eps;
  cfg.max_iters = iters;
  cfg.f_lower_bound = inst.f_lb;
  return cfg;
}

TEST(Hba, QuadraticOverOrthantReachesFixedPoint) {
  Vector xhat(2);
  xhat << 2.0, 3.0;
  const Instance inst = testing::quadratic_orthant(xhat, 1e-3);
  SolverConfig cfg = fixed_config(inst);
  const SolveResult r = hba_solve(inst.problem, cfg);
  ASSERT_EQ(r.termination, Termination::kEpsilonStationary) << r.message;
  EXPECT_LE(r.trace.back().lambda, 1e-6);
  EXPECT_NEAR(r.x_final[0], oracle::kQuadFixedPoint1, 1e-5);
  EXPECT_NEAR(r.x_final[1], oracle::kQuadFixedPoint2, 1e-5);
  EXPECT_NEAR(testing::bisect_fixed_point(2.0, 1e-3), oracle::kQuadFixedPoint1, 1e-14);
  // Displacement d_nu(x^k, x^{k+1}) = alpha delta vanishes before termination.
  const auto& last_step = r.trace[r.trace.size() - 2];
  EXPECT_LT(last_step.alpha * last_step.delta, 1e-6);
}

TEST(Hba, ZeroObjectiveAtCenterStopsImmediately) {
  Problem p;
  p.n = 3;
  p.objective = std::make_shared<FunctionObjective>(
      [](const Vector&) { return 0.0; }, [](const Vector& x) { return Vector::Zero(x.size()); });
  p.cons = ConstraintSet(Matrix::Ones(1, 3), Vector::Ones(1));
  p.kernel = make_kernel(KernelKind::kBurg, 3);
  p.x0 = Vector::Constant(3, 1.0 / 3.0);
  SolverConfig cfg;
  cfg.L = 1.0;
  const SolveResult r = hba_solve(p, cfg);
  EXPECT_EQ(r.termination, Termination::kEpsilonStationary);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_LT(r.trace.front().lambda, 1e-14);
  EXPECT_EQ(r.x_final, *p.x0);
}

class DescentSuite : public ::testing::TestWithParam<int> {};

TEST_P(DescentSuite, DecreaseMatchesEtaAndBeatsOmegaTilde) {
  const auto suite = testing::descent_suite();
  const Instance& inst = suite[static_cast<size_t>(GetParam())];
  SolverConfig cfg = fixed_config(inst, 1e-6, 400);
  cfg.keep_iterates = true;
  const SolveResult r = hba_solve(inst.problem, cfg);
  ASSERT_NE(r.termination, Termination::kNumericalFailure) << inst.label << ": " << r.message;
  const auto& tr = r.trace;
  ASSERT_EQ(r.iterates.size(), tr.size());
  for (size_t k = 0; k + 1 < tr.size(); ++k) {
    const auto& row = tr[k];
    const double tol = 1e-9 * std::max(1.0, std::abs(row.F_mu));
    EXPECT_LE(row.next_F_mu, row.F_mu - row.Delta + tol) << inst.label << " k=" << k;
    StepContext c;
    c.nu = r.kernel_params.nu;
    c.L_plus_mu = inst.L + inst.mu;
    c.delta = row.delta;
    c.lambda = row.lambda;
    EXPECT_NEAR(row.Delta, eta(c, row.alpha), 1e-12 * std::max(1.0, row.Delta));
    EXPECT_GE(row.Delta, trace_omega_tilde(r, cfg, row) - 1e-9) << inst.label << " k=" << k;
    // Interior feasibility of every iterate.
    const Vector& x = r.iterates[k + 1];
    EXPECT_TRUE(inst.problem.kernel->in_domain(x));
    EXPECT_LE(inst.problem.cons.residual(x), 1e-9 * (1.0 + inst.problem.cons.b().norm()));
  }
}

INSTANTIATE_TEST_SUITE_P(Instances, DescentSuite, ::testing::Range(0, 20));

TEST(Hba, StationarityCertificateAtTermination) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexBurg, 1, 1e-2);
  const SolverConfig cfg = fixed_config(inst, 1e-7);
  const SolveResult r = hba_solve(inst.problem, cfg);
  ASSERT_EQ(r.termination, Termination::kEpsilonStationary);
  const Vector& x = r.x_final;
  const auto& h = *inst.problem.kernel;
  const Vector gf = inst.problem.objective->gradient(x);
  const LocalGeometry geo(h, x);
  const double chi = criticality(geo, gf, r.y_final, inst.problem.cons);
  const double lam = r.trace.back().lambda;
  EXPECT_LE(chi, lam + inst.mu * geo.dual_norm(h.gradient(x)) + 1e-12);
  const double resid = (gf - inst.problem.cons.A().transpose() * r.y_final).norm();
  EXPECT_LE(resid, std::sqrt(r.estimates.tau_h) * (lam + inst.mu * r.estimates.M_mu) + 1e-12);
}

TEST(Hba, EmpiricalStoppingWithinBound) {
  for (const Instance& inst : testing::descent_suite()) {
    // The power family's global L bound is ~1e5, so it needs millions of steps.
    if (inst.label.rfind("affine/power", 0) == 0) continue;
    SolverConfig cfg = fixed_config(inst, 1e-2, 200000);
    const SolveResult r = hba_solve(inst.problem, cfg);
    ASSERT_EQ(r.termination, Termination::kEpsilonStationary) << inst.label;
    const StoppingReport rep = stopping_times(r, cfg);
    ASSERT_TRUE(rep.N_empirical.has_value());
    EXPECT_LE(*rep.N_empirical, rep.N_bound) << inst.label;
    EXPECT_TRUE(rep.sanity);
  }
}

TEST(Hba, PotentialDecreaseRuleStops) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexEntropy, 0);
  SolverConfig cfg = fixed_config(inst, 1e-4, 100000);
  cfg.stopping = StoppingRule::kPotentialDecrease;
  const SolveResult r = hba_solve(inst.problem, cfg);
  EXPECT_EQ(r.termination, Termination::kEpsilonStationary) << r.message;
  const double thr = gamma_hat(3.0) * 1e-8 / (inst.L + inst.mu);
  const auto& last_step = r.trace[r.trace.size() - 2];
  for (size_t k = 0; k + 1 < r.trace.size(); ++k) {
    EXPECT_LT(r.trace[k].next_F_mu - r.trace[k].F_mu, -thr) << k;
  }
}

TEST(Hba, IterationCapRunsExactly) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexEntropy, 0);
  SolverConfig cfg = fixed_config(inst, 1e-6, 17);
  cfg.stopping = StoppingRule::kIterationCap;
  const SolveResult r = hba_solve(inst.problem, cfg);
  EXPECT_EQ(r.termination, Termination::kIterationCap);
  EXPECT_EQ(r.iterations, 17);
  EXPECT_EQ(r.trace.size(), 18u);
}

TEST(Hba, FourEpsilonPresetSetsK2) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexBurg, 0);
  SolverConfig cfg = fixed_config(inst, 1e-2, 1000000);
  cfg.mu = 4e-2;
  cfg.stopping = StoppingRule::kPotentialDecrease;
  ASSERT_TRUE(is_four_epsilon_preset(cfg));
  const SolveResult r = hba_solve(inst.problem, cfg);
  ASSERT_TRUE(r.K2.has_value());
  EXPECT_EQ(*r.K2, k2_bound(cfg, 3.0, r.trace.front().f));
  EXPECT_LE(r.iterations, *r.K2);
  const StoppingReport rep = stopping_times(r, cfg);
  ASSERT_TRUE(rep.K2.has_value());
  EXPECT_TRUE(rep.sanity);
  cfg.mu = 1e-2;
  EXPECT_FALSE(is_four_epsilon_preset(cfg));
  EXPECT_FALSE(hba_solve(inst.problem, cfg).K2.has_value());
}

TEST(Ahba, EvaluationCountBound) {
  for (const Instance& inst : testing::descent_suite()) {
    SolverConfig cfg = fixed_config(inst, 1e-6, 200);
    cfg.adaptive = true;
    cfg.L0 = inst.L;
    cfg.stopping = StoppingRule::kIterationCap;
    const SolveResult r = ahba_solve(inst.problem, cfg);
    ASSERT_NE(r.termination, Termination::kNumericalFailure) << inst.label << ": " << r.message;
    const double bound = 2.0 * r.iterations + std::log2(2.0 * inst.L / cfg.L0);
    EXPECT_LE(static_cast<double>(r.function_evals), bound) << inst.label;
    for (const auto& row : r.trace) EXPECT_LE(row.L_k, 2.0 * inst.L * (1.0 + 1e-12));
  }
}

TEST(Ahba, LargeInitialEstimateShrinks) {
  const Instance inst = testing::make_instance(testing::Family::kOrthantBurg, 1);
  SolverConfig cfg = fixed_config(inst, 1e-6, 50);
  cfg.adaptive = true;
  cfg.L0 = 8.0 * inst.L;
  cfg.stopping = StoppingRule::kIterationCap;
  const SolveResult r = ahba_solve(inst.problem, cfg);
  ASSERT_GE(r.trace.size(), 5u);
  EXPECT_LE(r.trace[4].L_k, 2.0 * inst.L);
  EXPECT_LT(r.trace[1].L_k, r.trace[0].L_k);
}

TEST(Ahba, SmallInitialEstimateStillConverges) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexRegBurg4, 0);
  SolverConfig cfg = fixed_config(inst, 1e-7);
  cfg.adaptive = true;
  cfg.L0 = 1e-4 * inst.L;
  const SolveResult r = ahba_solve(inst.problem, cfg);
  EXPECT_EQ(r.termination, Termination::kEpsilonStationary) << r.message;
  SolverConfig ref = fixed_config(inst, 1e-9);
  const SolveResult rf = hba_solve(inst.problem, ref);
  EXPECT_LT((r.x_final - rf.x_final).lpNorm<Eigen::Infinity>(), 1e-4);
}

TEST(Solve, DispatchesOnAdaptiveFlag) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexBurg, 0);
  SolverConfig cfg = fixed_config(inst, 1e-6, 30);
  cfg.stopping = StoppingRule::kIterationCap;
  EXPECT_EQ(solve(inst.problem, cfg).x_final, hba_solve(inst.problem, cfg).x_final);
  cfg.adaptive = true;
  cfg.L0 = inst.L;
  EXPECT_EQ(solve(inst.problem, cfg).x_final, ahba_solve(inst.problem, cfg).x_final);
}

TEST(Solve, RejectsBadConfigAndStart) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexBurg, 0);
  SolverConfig cfg = fixed_config(inst);
  cfg.mu = 0.0;
  EXPECT_THROW(hba_solve(inst.problem, cfg), ConstructionError);
  cfg = fixed_config(inst);
  cfg.max_iters = 0;
  EXPECT_THROW(hba_solve(inst.problem, cfg), ConstructionError);
  cfg = fixed_config(inst);
  cfg.L = -1.0;
  EXPECT_THROW(hba_solve(inst.problem, cfg), ConstructionError);
  Problem p = inst.problem;
  p.x0 = Vector::Constant(p.n, 2.0);  // interior but off the simplex
  EXPECT_THROW(hba_solve(p, fixed_config(inst)), DomainError);
  p.x0 = Vector::Constant(p.n, -1.0);
  EXPECT_THROW(hba_solve(p, fixed_config(inst)), DomainError);
}

TEST(Solve, NonFiniteObjectiveIsReported) {
  Instance inst = testing::make_instance(testing::Family::kOrthantBurg, 0);
  inst.problem.objective = std::make_shared<FunctionObjective>(
      [](const Vector&) { return std::nan(""); },
      [](const Vector& x) { return Vector::Zero(x.size()); });
  const SolveResult r = hba_solve(inst.problem, fixed_config(inst));
  EXPECT_EQ(r.termination, Termination::kNumericalFailure);
  EXPECT_FALSE(r.message.empty());
}

TEST(Solve, TraceHeaderMatchesColumns) {
  const Instance inst = testing::make_instance(testing::Family::kSimplexBurg, 0);
  SolverConfig cfg = fixed_config(inst, 1e-6, 3);
  cfg.stopping = StoppingRule::kIterationCap;
  const SolveResult r = hba_solve(inst.problem, cfg);
  std::ostringstream os;
  write_trace_csv(os, r.trace);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  std::string expect;
  for (const auto& c : trace_columns()) expect += (expect.empty() ? "" : ",") + c;
  EXPECT_EQ(header, expect);
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(r.trace.back().alpha, 0.0);
  EXPECT_EQ(r.trace.back().next_F_mu, r.trace.back().F_mu);
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(AnalyticCenter, SimplexBurgIsUniform) {
  const auto h = make_kernel(KernelKind::kBurg, 3);
  const ConstraintSet cons(Matrix::Ones(1, 3), Vector::Ones(1));
  Vector x0(3);
  x0 << 0.6, 0.3, 0.1;
  const AnalyticCenter ac = analytic_center(h, cons, x0, 1e-12);
  EXPECT_LT((ac.x - Vector::Constant(3, 1.0 / 3.0)).norm(), 1e-10);
  EXPECT_LT(ac.c, 1e-20);
}

TEST(AnalyticCenter, RegularizedBurgMinimizerIsOnes) {
  KernelShape s;
  s.c = 1.0;
  const auto h = make_kernel(KernelKind::kRegularizedBurg, 4, s);
  const AnalyticCenter ac = analytic_center(h, ConstraintSet(4), Vector::Constant(4, 3.0), 1e-12);
  EXPECT_LT((ac.x - Vector::Ones(4)).norm(), 1e-10);
  EXPECT_LT(ac.c, 1e-20);
}

TEST(AnalyticCenter, OptimalStartIsUnchanged) {
  const auto h = make_kernel(KernelKind::kBurg, 3);
  const ConstraintSet cons(Matrix::Ones(1, 3), Vector::Ones(1));
  const Vector x0 = Vector::Constant(3, 1.0 / 3.0);
  const AnalyticCenter ac = analytic_center(h, cons, x0, 1e-10);
  EXPECT_EQ(ac.iterations, 0);
  EXPECT_EQ(ac.x, x0);
}

TEST(AnalyticCenter, UnboundedKernelThrows) {
  const auto h = make_kernel(KernelKind::kBurg, 2);
  EXPECT_THROW(analytic_center(h, ConstraintSet(2), Vector::Ones(2), 1e-10, 50), NumericalError);
}

TEST(Termination, Names) {
  EXPECT_EQ(termination_name(Termination::kEpsilonStationary), "epsilon-stationary");
  EXPECT_EQ(termination_name(Termination::kNearOptimal), "near-optimal");
}

}  // namespace
}  // namespace hba
