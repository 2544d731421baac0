#include <benchmark/benchmark.h>

#include "qmac/oracles.hpp"

using namespace qmac;

namespace {
const ChannelParams kParams{1.0, 1.2, 0.2, 0.5, 0.3};
}

static void BM_MonteCarloMI(benchmark::State& state) {
  const auto ch = heterodyne_channel(kParams, 1.7);
  const auto ka = SourceSpec::heterodyne(2.0).input_cov;
  const auto kb = SourceSpec::heterodyne(1.0).input_cov;
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_gaussian_mi(ch, ka, kb, 100000, 1, jobs));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_MonteCarloMI)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_Langevin(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_langevin(kParams, 1.0, 2000, 1, jobs));
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_Langevin)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_PovmSearch(benchmark::State& state) {
  Philox4x32 rng(9);
  const auto e1 = random_ensemble(2, 2, rng);
  const auto e2 = random_ensemble(2, 2, rng);
  const auto ch = random_kraus_channel(4, 4, 2, rng);
  AccessibleInfoOptions opts;
  opts.iterations = 300;
  opts.n_outcomes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_accessible_info(e1, e2, ch, opts));
}
BENCHMARK(BM_PovmSearch)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
