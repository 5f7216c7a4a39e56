#include <benchmark/benchmark.h>

#include <ddfilter/oracle.hpp>

using namespace ddfilter;

static void BM_GrammianChi(benchmark::State& state) {
  const auto seq = make_canonical(Family::CPMG, 4);
  const auto spec = ohmic(1.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grammian_chi(seq, spec, 1.0, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_GrammianChi)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const auto seq = make_canonical(Family::UDD, 6);
  const auto spec = ohmic(1.0, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_w(seq, spec, 1.0, 1000, 8192, 1));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);
