// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace admgid {

/// One SplitMix64 step; advances state.
std::uint64_t splitmix64(std::uint64_t &state) noexcept;

/// Hashes a root seed and a list of tags (stream kind, vertex index, ...)
/// into an independent-looking 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> tags) noexcept;

/// Stream tags. Each (seed, tag, indices...) triple names one stream, so
/// adding vertices or edges never perturbs the draws of existing ones.
enum class StreamTag : std::uint64_t {
  GraphOrder = 1,
  GraphCounts,
  DirectedPick,
  BidirectedPick,
  Parameters,
  VertexScale,
  VertexNoise,
  EdgeScale,
  EdgeNoise,
  EdgeWeight,
  LatentNoise,
  LoadingWeight,
  OracleDraw,
  InitDraw,
};

/// mt19937_64 seeded from derive_seed, with portable samplers (no reliance
/// on implementation-defined std:: distributions).
class Stream {
public:
  Stream(std::uint64_t seed, StreamTag tag,
         std::initializer_list<std::uint64_t> indices = {});

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n);
  /// Laplace(0, b) by inverse CDF.
  double laplace(double b);
  /// +1 or -1.
  double sign();

private:
  std::mt19937_64 engine_;
};

/// Uniformly random permutation of 0..n-1 (Fisher-Yates).
std::vector<int> random_permutation(Stream &s, int n);

/// k distinct indices from 0..n-1, uniformly, in draw order.
std::vector<std::uint64_t> sample_without_replacement(Stream &s, std::uint64_t n,
                                                      std::uint64_t k);

}  // namespace admgid
