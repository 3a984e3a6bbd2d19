#include <random>

#include <Eigen/QR>
#include <benchmark/benchmark.h>

#include "hba/problem.hpp"
#include "hba/solver.hpp"

namespace {

// One sparse-recovery instance: n = 120, m = 30, sparsity 8, p = 0.5.
hba::Problem lp_instance() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  const int n = 120, m = 30;
  hba::Matrix G(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) G(i, j) = gauss(rng);
  }
  const Eigen::HouseholderQR<hba::Matrix> qr(G);
  const hba::Matrix A = (qr.householderQ() * hba::Matrix::Identity(n, m)).transpose();
  hba::Vector xt = hba::Vector::Zero(n);
  for (int i = 0; i < 8; ++i) xt[i * 13] = 1.0;
  hba::LpParams lp;
  lp.A = A;
  lp.b = A * xt;
  return hba::build_lp_problem(lp);
}

void BM_AhbaLpRecovery(benchmark::State& state) {
  const hba::Problem p = lp_instance();
  hba::SolverConfig cfg;
  cfg.adaptive = true;
  cfg.mu = 1e-3;
  cfg.epsilon = 1e-6;
  cfg.max_iters = static_cast<int>(state.range(0));
  cfg.stopping = hba::StoppingRule::kIterationCap;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hba::ahba_solve(p, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AhbaLpRecovery)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PhaseOne(benchmark::State& state) {
  const hba::Problem p = lp_instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hba::positive_feasible_point(p.cons));
  }
}
BENCHMARK(BM_PhaseOne)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
