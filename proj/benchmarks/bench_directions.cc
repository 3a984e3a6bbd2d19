#include <random>

#include <benchmark/benchmark.h>

#include "hba/directions.hpp"
#include "hba/geometry.hpp"

namespace {

using hba::Matrix;
using hba::Vector;

struct Setup {
  hba::KernelHandle h;
  Vector x, g;
  hba::ConstraintSet cons;
};

Setup make_setup(int n, int m) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.1, 2.0);
  Setup s;
  s.h = hba::make_kernel(hba::KernelKind::kBurg, n);
  s.x.resize(n);
  s.g.resize(n);
  for (int i = 0; i < n; ++i) {
    s.x[i] = u(rng);
    s.g[i] = gauss(rng);
  }
  Matrix A(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  }
  s.cons = hba::ConstraintSet(A, A * s.x);
  return s;
}

// Args: n, m. The dense variant treats the same diagonal H as a full matrix.
void BM_DirectionDiagonal(benchmark::State& state) {
  const Setup s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    const hba::LocalGeometry geo(*s.h, s.x);
    benchmark::DoNotOptimize(hba::solve_direction(geo, s.cons, s.g, 2.0, 3.0));
  }
}

void BM_DirectionDense(benchmark::State& state) {
  const Setup s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    const hba::LocalGeometry geo(*s.h, s.x, true);
    benchmark::DoNotOptimize(hba::solve_direction(geo, s.cons, s.g, 2.0, 3.0));
  }
}

BENCHMARK(BM_DirectionDiagonal)->Args({120, 30})->Args({500, 50})->Args({2000, 100});
BENCHMARK(BM_DirectionDense)->Args({120, 30})->Args({500, 50});

}  // namespace
