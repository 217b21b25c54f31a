#include <benchmark/benchmark.h>

#include "gaitsym/decomposition.hpp"
#include "gaitsym/gait.hpp"
#include "gaitsym/signal.hpp"
#include "gaitsym/synth.hpp"

namespace {

gaitsym::TimeSeries trial(double seconds) {
  auto p = gaitsym::preset("RI");
  p.seed = 1;
  return gaitsym::generate_trial(p, seconds).series;
}

void BM_ZeroPhaseFilter(benchmark::State& state) {
  const auto series = trial(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaitsym::butterworth_lowpass(series));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(series.size()));
}
BENCHMARK(BM_ZeroPhaseFilter)->Arg(30)->Arg(300);

void BM_Stl(benchmark::State& state) {
  const auto series = trial(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaitsym::stl_decompose(series, 44));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(series.size()));
}
BENCHMARK(BM_Stl)->Arg(30)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_AnalyzeTrial(benchmark::State& state) {
  const auto series = trial(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaitsym::analyze_trial(series));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(series.size()));
}
BENCHMARK(BM_AnalyzeTrial)->Arg(30)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
