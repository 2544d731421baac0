#include <benchmark/benchmark.h>

// The packaged benchmark_main archive carries LTO bytecode from another GCC
// release, so the entry point is built here.
BENCHMARK_MAIN();
