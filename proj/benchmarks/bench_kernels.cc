#include <random>

#include <benchmark/benchmark.h>

#include "hba/geometry.hpp"
#include "hba/kernels.hpp"
#include "hba/stepsize.hpp"

namespace {

void BM_AlphaOpt(benchmark::State& state) {
  const double nu = static_cast<double>(state.range(0)) / 10.0;
  double delta = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hba::alpha_opt(nu, 10.0, delta));
    delta = delta < 100.0 ? delta * 1.01 : 0.5;
  }
}
BENCHMARK(BM_AlphaOpt)->Arg(26)->Arg(30)->Arg(35)->Arg(40);

void BM_OmegaNu(benchmark::State& state) {
  const double nu = static_cast<double>(state.range(0)) / 10.0;
  double t = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hba::omega_nu(nu, t));
    t = t < 0.9 ? t + 1e-3 : -0.9;
  }
}
BENCHMARK(BM_OmegaNu)->Arg(26)->Arg(30)->Arg(35)->Arg(40);

// Value, gradient and Hessian at one point, n = 500 (SOC uses a dense Hessian).
void BM_KernelOracles(benchmark::State& state) {
  const auto kind = static_cast<hba::KernelKind>(state.range(0));
  const auto h = hba::make_kernel(kind, 500);
  const hba::Vector x = h->interior_point();
  state.SetLabel(h->name());
  for (auto _ : state) {
    benchmark::DoNotOptimize(h->value(x));
    benchmark::DoNotOptimize(h->gradient(x));
    if (h->diagonal_hessian()) {
      benchmark::DoNotOptimize(h->hessian_diagonal(x));
    } else {
      benchmark::DoNotOptimize(h->hessian(x));
    }
  }
}
BENCHMARK(BM_KernelOracles)
    ->Arg(static_cast<int>(hba::KernelKind::kBurg))
    ->Arg(static_cast<int>(hba::KernelKind::kEntropyBarrier))
    ->Arg(static_cast<int>(hba::KernelKind::kPower))
    ->Arg(static_cast<int>(hba::KernelKind::kSecondOrderCone));

}  // namespace
