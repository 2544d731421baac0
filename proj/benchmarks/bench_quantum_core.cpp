#include <benchmark/benchmark.h>

#include "qmac/access_bounds.hpp"
#include "qmac/quantum_core.hpp"
#include "qmac/random.hpp"

using namespace qmac;

static void BM_Entropy(benchmark::State& state) {
  Philox4x32 rng(1);
  const auto rho = random_density(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(von_neumann_entropy(rho));
}
BENCHMARK(BM_Entropy)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_RelativeEntropy(benchmark::State& state) {
  Philox4x32 rng(2);
  const auto a = random_density(state.range(0), rng);
  const auto b = random_density(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(relative_entropy(a, b));
}
BENCHMARK(BM_RelativeEntropy)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_ApplyChannel(benchmark::State& state) {
  Philox4x32 rng(3);
  const auto dim = state.range(0);
  const auto ch = random_kraus_channel(dim, dim, 4, rng);
  const auto rho = random_density(dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_channel(ch, rho));
}
BENCHMARK(BM_ApplyChannel)->Arg(2)->Arg(4)->Arg(8);

// Two qubit senders through a 4x4 channel: every region quantity at once.
static void BM_HolevoBounds(benchmark::State& state) {
  Philox4x32 rng(4);
  const auto e1 = random_ensemble(static_cast<int>(state.range(0)), 2, rng);
  const auto e2 = random_ensemble(static_cast<int>(state.range(0)), 2, rng);
  const auto ch = random_kraus_channel(4, 4, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(holevo_rate_bounds(e1, e2, ch));
}
BENCHMARK(BM_HolevoBounds)->Arg(2)->Arg(4);

static void BM_InducedRegion(benchmark::State& state) {
  Philox4x32 rng(5);
  const auto e1 = random_ensemble(3, 2, rng);
  const auto e2 = random_ensemble(3, 2, rng);
  const auto ch = random_kraus_channel(4, 4, 3, rng);
  const auto povm = random_povm(4, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rate_region(induce_channel(e1, e2, ch, povm)));
}
BENCHMARK(BM_InducedRegion);
