// SPDX-License-Identifier: Apache-2.0

#include "admgid/random.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

namespace admgid {

std::uint64_t splitmix64(std::uint64_t &state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t state = seed;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t t : tags) {
    state = h ^ (t + 0x632BE59BD9B4E019ULL);
    h = splitmix64(state);
  }
  return h;
}

namespace {

std::uint64_t stream_seed(std::uint64_t seed, StreamTag tag,
                          std::initializer_list<std::uint64_t> indices) {
  std::uint64_t h = derive_seed(seed, {static_cast<std::uint64_t>(tag)});
  for (std::uint64_t i : indices)
    h = derive_seed(h, {i});
  return h;
}

}  // namespace

Stream::Stream(std::uint64_t seed, StreamTag tag,
               std::initializer_list<std::uint64_t> indices)
    : engine_(stream_seed(seed, tag, indices)) {}

double Stream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Stream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Stream::below(std::uint64_t n) {
  if (n <= 1)
    return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do
    x = engine_();
  while (x >= limit);
  return x % n;
}

double Stream::laplace(double b) {
  // u in (-1/2, 1/2); reject the endpoint so the log stays finite.
  double u;
  do
    u = uniform() - 0.5;
  while (u == -0.5);
  return -b * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
}

double Stream::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

std::vector<int> random_permutation(Stream &s, int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[s.below(static_cast<std::uint64_t>(i) + 1)]);
  return perm;
}

std::vector<std::uint64_t> sample_without_replacement(Stream &s, std::uint64_t n,
                                                      std::uint64_t k) {
  // Sparse Fisher-Yates: only touched slots are stored.
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  auto at = [&](std::uint64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k && i < n; ++i) {
    const std::uint64_t j = i + s.below(n - i);
    const std::uint64_t vi = at(i), vj = at(j);
    moved[j] = vi;
    moved[i] = vj;
    out.push_back(vj);
  }
  return out;
}

}  // namespace admgid
