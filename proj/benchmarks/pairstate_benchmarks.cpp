#include <benchmark/benchmark.h>

#include "pairstate/multipair.hpp"
#include "pairstate/qstate.hpp"
#include "pairstate/tomography.hpp"

namespace pairstate {
namespace {

void BM_KernelTable(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    KernelTable table(0.01, 0.03, n_max);
    benchmark::DoNotOptimize(table.kernel(n_max, ProjectionClass::kHH));
  }
}
BENCHMARK(BM_KernelTable)->Arg(15)->Arg(30)->Arg(60);

void BM_RatesSweep(benchmark::State& state) {
  const KernelTable table(0.01, 0.03, 30);
  for (auto _ : state) {
    double sum = 0.0;
    for (int i = 1; i <= 100; ++i) sum += effective_g(table.rates(0.02 * i));
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_RatesSweep);

void BM_Concurrence(benchmark::State& state) {
  const DensityMatrix rho = werner(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(concurrence(rho));
}
BENCHMARK(BM_Concurrence);

void BM_LinearReconstruct(benchmark::State& state) {
  const ProjectionSet set = canonical_projection_set();
  const CountVector counts = simulate_counts(werner(0.2), set, 1e5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(linear_reconstruct(counts, set));
}
BENCHMARK(BM_LinearReconstruct);

void BM_MleReconstruct(benchmark::State& state) {
  const ProjectionSet set = canonical_projection_set();
  const CountVector counts = simulate_counts(werner(0.2), set, 1e5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mle_reconstruct(counts, set));
}
BENCHMARK(BM_MleReconstruct)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const SourceParams params{0.5, 0.1, 0.3, 15};
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_rates(params, 100000, 7, 1));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pairstate

BENCHMARK_MAIN();
