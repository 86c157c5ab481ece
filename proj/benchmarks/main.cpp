#include <benchmark/benchmark.h>

// Own main: the packaged benchmark_main archive is not portable across compilers.
BENCHMARK_MAIN();
