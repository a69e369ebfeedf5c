#include <benchmark/benchmark.h>

#include "jpmcount/constants.hpp"
#include "jpmcount/counting.hpp"
#include "jpmcount/dynamics.hpp"
#include "jpmcount/circuit.hpp"

namespace {

using namespace jpmcount;
using constants::kTwoPi;

dynamics::DetectorParams reference_point() {
  dynamics::DetectorParams dp;
  dp.g = kTwoPi * 30e6;
  dp.gamma1 = kTwoPi * 162.3e6;
  dp.gamma0 = 1e-3 * dp.gamma1;
  dp.Gamma10 = kTwoPi * 1e6;
  dp.Gamma11 = 5 * dp.Gamma10;
  dp.kappa = kTwoPi * 10e3;
  dp.t_cpt = 17.4e-9;
  dp.t_rr = 300e-9;
  return dp;
}

void BM_KernelSectors(benchmark::State& state) {
  const auto dp = reference_point();
  for (auto _ : state) benchmark::DoNotOptimize(counting::build_kernel(dp, state.range(0)));
}
BENCHMARK(BM_KernelSectors)->Arg(6)->Arg(16)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_KernelDense(benchmark::State& state) {
  const auto dp = reference_point();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        counting::build_kernel(dp, state.range(0), dynamics::CaptureEngine::DenseLindblad));
}
BENCHMARK(BM_KernelDense)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_PovmBinomial(benchmark::State& state) {
  const auto kernel = counting::build_kernel(reference_point(), 41);
  for (auto _ : state) benchmark::DoNotOptimize(counting::povm_binomial(kernel, state.range(0)));
}
BENCHMARK(BM_PovmBinomial)->Arg(5)->Arg(20);

void BM_PovmGeometric(benchmark::State& state) {
  const auto kernel = counting::build_kernel(reference_point(), 41);
  for (auto _ : state) benchmark::DoNotOptimize(counting::povm_geometric(kernel, state.range(0)));
}
BENCHMARK(BM_PovmGeometric)->Arg(5)->Arg(20);

void BM_EffectiveParams(benchmark::State& state) {
  const circuit::CircuitParams cp{1e-12, 1e-9, 1e-12, 0.5e-9, 1.2e-6, 0.01e-12, 2.72};
  for (auto _ : state) benchmark::DoNotOptimize(circuit::effective_params(cp));
}
BENCHMARK(BM_EffectiveParams)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
