#include <benchmark/benchmark.h>

#include <vector>

#include "amshe/domain.hpp"
#include "amshe/kernel.hpp"
#include "amshe/noise.hpp"
#include "amshe/seeds.hpp"
#include "amshe/solver.hpp"

namespace {

amshe::DiscreteKernel make_kernel(int d, double L, std::size_t n, double h) {
  amshe::DomainSpec domain(amshe::Geometry::Torus, d, L, n);
  amshe::KernelSpec spec;
  spec.half_width = h;
  return amshe::build_kernel(spec, domain);
}

void BM_NoiseSlice(benchmark::State& state) {
  const auto kernel = make_kernel(static_cast<int>(state.range(0)), 1.0, static_cast<std::size_t>(state.range(1)), 0.25);
  amshe::NoiseSampler sampler(kernel);
  amshe::Rng rng(1);
  std::vector<double> out(kernel.domain.cell_count());
  for (auto _ : state) {
    sampler.sample_into(rng, 1e-3, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_NoiseSlice)->Args({1, 64})->Args({1, 256})->Args({2, 128})->Args({2, 512});

void BM_HeatStep(benchmark::State& state) {
  const auto kernel = make_kernel(static_cast<int>(state.range(0)), 1.0, static_cast<std::size_t>(state.range(1)), 0.25);
  amshe::Stepper stepper(kernel.domain);
  std::vector<double> field(kernel.domain.cell_count(), 1.0);
  for (auto _ : state) {
    stepper.heat(field, 1e-3);
    benchmark::DoNotOptimize(field.data());
  }
}
BENCHMARK(BM_HeatStep)->Args({1, 64})->Args({1, 256})->Args({2, 128})->Args({2, 512});

// One adjoint martingale step: U and V slices, the multiplicative update and the QV form.
void BM_AdjointRun(benchmark::State& state) {
  const auto kernel = make_kernel(1, 0.5, static_cast<std::size_t>(state.range(0)), 0.1);
  amshe::PathWorkspace ws(kernel);
  const auto mu = amshe::make_measure({amshe::Atom{1.0, {0.0, 0.0, 0.0}}});
  const amshe::SchemeParams params{1e-3, 1.0, 1.0};
  std::uint64_t path = 0;
  for (auto _ : state) {
    auto streams = amshe::PathNoise::for_path(7, path++);
    auto p = amshe::adjoint_martingale_run(mu, params, ws, 1.0, 1, streams);
    benchmark::DoNotOptimize(p.M.back());
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_AdjointRun)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
