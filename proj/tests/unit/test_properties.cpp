// SPDX-License-Identifier: Apache-2.0
// Invariants of the identifiability criteria, checked over random graphs.

#include <gtest/gtest.h>

#include "admgid/ident.hpp"
#include "admgid/oracle.hpp"
#include "admgid/simulate.hpp"
#include "test_support.hpp"

using namespace admgid;
using admgid::testing::subsets;

TEST(VRankProperties, MonotoneWithBoundedIncrements) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const MixedGraph g = random_admg(6, 0.15 + 0.005 * static_cast<double>(seed), seed);
    for (Vertex v = 0; v < 6; ++v) {
      const auto all = subsets(g.parents(v));
      const std::size_t r_size = removable_ancestors(g, v).size();
      for (const auto &q : all) {
        const Capacity rq = v_rank(g, v, q);
        ASSERT_LE(static_cast<std::size_t>(rq), std::min(r_size, q.size()));
        for (const auto &q2 : all) {
          if (!q.is_subset_of(q2))
            continue;
          const Capacity rq2 = v_rank(g, v, q2);
          ASSERT_LE(rq, rq2);
          ASSERT_LE(rq2, rq + static_cast<Capacity>(q2.size() - q.size()));
        }
      }
    }
  }
}

TEST(VRankProperties, TripleOracleOnSampledFiveVertexGraphs) {
  for (std::uint64_t i = 0; i < 150; ++i) {
    const MixedGraph g = sampled_admg(5, 77, i);
    const RankCrossCheck r = cross_check_ranks(g, 77);
    ASSERT_FALSE(r.mismatch.has_value()) << "graph index " << i;
  }
}

TEST(GlobalProperties, ThreeWaysAgree) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const MixedGraph g = random_admg(7, 0.1 + 0.003 * static_cast<double>(seed), seed);
    const IdentReport r = is_matrix_identifiable(g);
    bool columns = true, flows = true;
    for (const auto &c : r.columns)
      columns = columns && c.identifiable;
    for (Vertex v = 0; v < 7; ++v)
      flows = flows && v_rank(g, v, g.parents(v)) == static_cast<Capacity>(g.parents(v).size());
    EXPECT_EQ(r.all_identifiable(), columns);
    EXPECT_EQ(is_globally_identifiable(g), flows);
    EXPECT_EQ(columns, flows);
  }
}

// Column verdict agrees with the dimension of the generic fiber.
TEST(GlobalProperties, ColumnVerdictMatchesFiber) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const MixedGraph g = random_admg(6, 0.5, seed);
    const IdentReport r = is_matrix_identifiable(g);
    for (const auto &c : r.columns)
      EXPECT_EQ(c.identifiable, generic_fiber(g, c.vertex, {}, seed).dimension == 0);
  }
}
