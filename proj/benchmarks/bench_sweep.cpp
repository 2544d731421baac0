#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qmac/cli.hpp"

namespace fs = std::filesystem;

namespace {

// 2000-point optimized homodyne sweep; scales with --jobs.
fs::path sweep_config() {
  const fs::path path = fs::temp_directory_path() / "qmac_bench_sweep.toml";
  std::ofstream(path) << R"(
[params]
omega1 = 1.0
omega2 = 1.2
coupling = 0.2
gamma = 0.5
temperature = 0.3
[inputs]
nbar1 = 2.0
nbar2 = 1.0
optimize = true
[grid]
t = { start = 0.0, stop = 20.0, points = 500 }
nbar2 = [0.5, 1.0, 2.0, 4.0]
)";
  return path;
}

}  // namespace

static void BM_OptimizedSweep(benchmark::State& state) {
  const std::string cfg = sweep_config().string();
  const std::string jobs = std::to_string(state.range(0));
  const char* argv[] = {"qmac", "homodyne-sweep", "--config", cfg.c_str(), "--jobs", jobs.c_str()};
  for (auto _ : state) {
    std::ostringstream out, err;
    if (qmac::cli::run(6, argv, out, err) != 0) state.SkipWithError(err.str().c_str());
    benchmark::DoNotOptimize(out.str().size());
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_OptimizedSweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
