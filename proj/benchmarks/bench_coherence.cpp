#include <benchmark/benchmark.h>

#include <ddfilter/coherence.hpp>
#include <ddfilter/optimize.hpp>

using namespace ddfilter;

static void BM_ChiOhmic(benchmark::State& state) {
  const auto seq = make_canonical(Family::UDD, 6);
  const auto spec = ohmic(1.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(chi(seq, spec, 1.0));
}
BENCHMARK(BM_ChiOhmic)->Arg(2)->Arg(10)->Arg(100);

static void BM_ChiSupraOhmic(benchmark::State& state) {
  const auto seq = make_canonical(Family::UDD, 20);
  const auto spec = supra_ohmic(1.14e-26, 3e12);
  for (auto _ : state) benchmark::DoNotOptimize(chi(seq, spec, 100e-12));
}
BENCHMARK(BM_ChiSupraOhmic);

static void BM_LagKernelChi(benchmark::State& state) {
  const auto spec = supra_ohmic(1.14e-26, 3e12);
  const LagKernel kernel(spec, 100e-12);
  const auto seq = make_canonical(Family::UDD, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel.chi(seq.deltas()));
}
BENCHMARK(BM_LagKernelChi)->Arg(10)->Arg(100);

static void BM_OptimizeLodd(benchmark::State& state) {
  const auto spec = ohmic(1.0, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_lodd(spec, 6, 1.0));
}
BENCHMARK(BM_OptimizeLodd)->Unit(benchmark::kMillisecond);
