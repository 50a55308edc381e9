// SPDX-License-Identifier: Apache-2.0
// Own entry point: the distro's benchmark_main archive carries LTO bytecode
// from a different compiler release.

#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
