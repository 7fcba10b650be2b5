#include <benchmark/benchmark.h>

#include "patternlab/curve.hpp"
#include "patternlab/domain_sim.hpp"
#include "patternlab/fit.hpp"
#include "patternlab/grid.hpp"
#include "patternlab/model.hpp"
#include "patternlab/presets.hpp"
#include "patternlab/sampling.hpp"

namespace {

using namespace patternlab;

void BM_TestAccuracyExact(benchmark::State& state) {
  const Scenario s = random_scenario(static_cast<std::size_t>(state.range(0)), 1);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(test_accuracy_exact(s, t));
    t = t > 10.0 ? 0.0 : t + 0.01;
  }
}
BENCHMARK(BM_TestAccuracyExact)->DenseRange(2, 20, 6);

void BM_TestAccuracyMc(benchmark::State& state) {
  const Scenario s = random_scenario(32, 1);
  for (auto _ : state) benchmark::DoNotOptimize(test_accuracy_mc(s, 3.0, state.range(0), 7));
}
BENCHMARK(BM_TestAccuracyMc)->Arg(10'000)->Arg(100'000);

void BM_PresetCurve(benchmark::State& state) {
  const Scenario s = grokking_preset();
  const auto grid = GridSpec::parse(kDefaultGrid).values();
  for (auto _ : state) benchmark::DoNotOptimize(curve(s, grid));
}
BENCHMARK(BM_PresetCurve);

void BM_DomainSim(benchmark::State& state) {
  DomainSimConfig config{random_scenario(6, 3), 4.0, static_cast<std::uint64_t>(state.range(0)), 1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DomainSim)->Arg(100'000);

void BM_Fit(benchmark::State& state) {
  const Curve c = curve(grokking_preset(), GridSpec::parse("log:0.1:1e4:64").values());
  const ObservedCurve obs{c.grid, c.train, c.test, {}};
  FitConfig config;
  config.preferred = grokking_preset().preferred();
  config.baseline = grokking_preset().baseline();
  config.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(fit(obs, config));
}
BENCHMARK(BM_Fit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
