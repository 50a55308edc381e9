// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "admgid/kernels.hpp"
#include "admgid/random.hpp"

namespace {

using namespace admgid;

Eigen::VectorXd draw(Stream &s, Eigen::Index n) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = s.laplace(1.0);
  return x;
}

void run(benchmark::State &state, const KernelSpec &k) {
  const Eigen::Index n = state.range(0);
  Stream s(1, StreamTag::OracleDraw, {static_cast<std::uint64_t>(n)});
  const Eigen::VectorXd x = draw(s, n), y = draw(s, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(hsic_biased(x, y, k, k));
  state.SetComplexityN(n);
}

void BM_HsicPoly(benchmark::State &state) { run(state, KernelSpec::polynomial()); }
void BM_HsicRbf(benchmark::State &state) { run(state, KernelSpec::rbf()); }

BENCHMARK(BM_HsicPoly)->RangeMultiplier(4)->Range(64, 65536)->Complexity();
BENCHMARK(BM_HsicRbf)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

}  // namespace
