// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "admgid/ident.hpp"
#include "admgid/simulate.hpp"

namespace {

using namespace admgid;

// Global criterion on random graphs; one max flow per vertex.
void BM_GlobalCriterion(benchmark::State &state) {
  const int p = static_cast<int>(state.range(0));
  const double density = static_cast<double>(state.range(1)) / 10.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const MixedGraph g = random_admg(p, density, ++seed);
    benchmark::DoNotOptimize(is_globally_identifiable(g));
  }
}
BENCHMARK(BM_GlobalCriterion)->ArgsProduct({{10, 25, 50}, {2, 5, 8}});

// Full report including edge verdicts and witnesses.
void BM_MatrixReport(benchmark::State &state) {
  const int p = static_cast<int>(state.range(0));
  const MixedGraph g = random_admg(p, 0.3, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(is_matrix_identifiable(g));
}
BENCHMARK(BM_MatrixReport)->Arg(10)->Arg(25)->Arg(50);

}  // namespace
