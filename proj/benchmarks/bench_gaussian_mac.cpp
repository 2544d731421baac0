#include <benchmark/benchmark.h>

#include "qmac/gaussian_mac.hpp"

using namespace qmac;

namespace {
const ChannelParams kParams{1.0, 1.2, 0.2, 0.5, 0.3};
}

static void BM_TransferCoefficients(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transfer_coefficients(kParams, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_TransferCoefficients);

static void BM_HeterodyneClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(heterodyne_rates(kParams, 1.7, 2.0, 1.0));
}
BENCHMARK(BM_HeterodyneClosedForm);

// Same rates through the covariance log-determinants.
static void BM_HeterodyneAssembled(benchmark::State& state) {
  const auto ka = SourceSpec::heterodyne(2.0).input_cov;
  const auto kb = SourceSpec::heterodyne(1.0).input_cov;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_rate_point(heterodyne_channel(kParams, 1.7), ka, kb));
  }
}
BENCHMARK(BM_HeterodyneAssembled);

static void BM_HomodyneClosedForm(benchmark::State& state) {
  const auto s1 = SourceSpec::homodyne(2.0, 0.3);
  const auto s2 = SourceSpec::homodyne(1.0, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(homodyne_two_user_rates(kParams, 1.7, s1, s2));
}
BENCHMARK(BM_HomodyneClosedForm);

static void BM_OptimalSqueezing(benchmark::State& state) {
  const ChannelParams p{1.0, 1.0, 0.0, 0.5, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(optimal_squeezing(p, 0.8, 2.0));
}
BENCHMARK(BM_OptimalSqueezing);

static void BM_TwoUserSqueezing(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_two_user_squeezing(kParams, t, 2.0, 1.0));
}
BENCHMARK(BM_TwoUserSqueezing)->Arg(1)->Arg(17)->Arg(100);
