#include <benchmark/benchmark.h>

#include <ddfilter/filter.hpp>
#include <ddfilter/metrics.hpp>

using namespace ddfilter;

static void BM_FilterValue(benchmark::State& state) {
  const auto seq = make_canonical(Family::UDD, static_cast<int>(state.range(0)));
  double u = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_value(seq, u));
    u = u < 1e3 ? u * 1.001 : 1.0;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FilterValue)->RangeMultiplier(4)->Range(1, 256)->Complexity();

static void BM_SampleFilter(benchmark::State& state) {
  const auto seq = make_canonical(Family::CPMG, 10);
  for (auto _ : state) benchmark::DoNotOptimize(sample_filter(seq, 1e-4, 1e4, 200));
}
BENCHMARK(BM_SampleFilter);

static void BM_ComputeMetrics(benchmark::State& state) {
  const auto samples = sample_filter(make_canonical(Family::UDD, 8), 1e-4, 1e4, 200);
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(samples));
}
BENCHMARK(BM_ComputeMetrics);
