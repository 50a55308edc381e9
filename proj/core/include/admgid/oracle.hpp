// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "admgid/graph.hpp"
#include "admgid/ident.hpp"
#include "admgid/params.hpp"

namespace admgid {

/// Relative singular-value cutoff for numeric ranks.
inline constexpr double kRankTolerance = 1e-8;
/// |det(I−Λ)| below this is treated as singular.
inline constexpr double kSingularTolerance = 1e-8;
/// Largest graph gvl_check accepts.
inline constexpr std::size_t kMaxGvlVertices = 8;
/// Partial states explored by enumerate_path_systems before giving up.
inline constexpr std::size_t kMaxPathStates = 1'000'000;

/// Throws Error{SingularMatrix} when |det(I−Λ)| < kSingularTolerance.
PathMatrix path_matrix(const ParamMatrix &lam);

/// Number of singular values above tol · σ_max. Empty matrices have rank 0.
int numeric_rank(const Eigen::MatrixXd &m, double tol = kRankTolerance);

/// A system of pairwise vertex-disjoint directed paths; paths[k] starts at
/// the k-th smallest source.
using PathSystem = std::vector<std::vector<Vertex>>;

/// All non-intersecting systems from `sources` onto `targets` (any
/// matching). Paths use only vertices in `allowed` when it is non-null.
/// `limit` > 0 stops after that many systems.
/// Throws Error{SizeMismatch | TooLarge}.
std::vector<PathSystem> enumerate_path_systems(const MixedGraph &g,
                                               const VertexSet &sources,
                                               const VertexSet &targets,
                                               const VertexSet *allowed = nullptr,
                                               std::size_t limit = 0);

/// Largest k such that some k-subsets of `sources` and `targets` are
/// joined by a non-intersecting system inside `allowed`.
std::size_t max_path_system_size(const MixedGraph &g, const VertexSet &sources,
                                 const VertexSet &targets,
                                 const VertexSet *allowed = nullptr);

/// Brute-force r^v_q: max_path_system_size from R_v into q inside an(v)\{v}.
std::size_t brute_force_v_rank(const MixedGraph &g, Vertex v, const VertexSet &q);

struct GvlValues {
  double det = 0.0;
  double path_sum = 0.0;
};

/// det of the |I|×|J| minor of (I−Λ)^{-1} on rows I, columns J (that is,
/// det (B_Λ)_{J,I}) next to the signed sum Σ sgn(σ_Π) λ^Π over
/// non-intersecting systems Π from I onto J.
/// Throws Error{SizeMismatch | TooLarge | CyclicGraph}.
GvlValues gvl_check(const MixedGraph &g, const ParamMatrix &lam,
                    const VertexSet &rows, const VertexSet &cols);

/// A = (I−Λ̃)ᵀ B_Λ assembled entrywise:
/// a_vu = b_vu − Σ_{w ∈ pa(v) ∩ de(u)} λ̃_wv b_wu, and exactly 0 off de(u).
/// Throws Error{BindingMismatch | CyclicGraph}.
Eigen::MatrixXd a_matrix(const MixedGraph &g, const ParamMatrix &lam,
                         const ParamMatrix &lam_tilde);

/// (B_Λ)^v = [(B_Λ)_{pa(v),R_v}]ᵀ, rows R_v, columns pa(v).
Eigen::MatrixXd coefficient_block(const MixedGraph &g, const PathMatrix &b,
                                  Vertex v);

struct Fiber {
  /// Dimension of the solution set of the column-v linear system with the
  /// K coordinates pinned.
  int dimension = 0;
  /// Parents of v whose coordinate is the same across all solutions.
  VertexSet fixed;
};

/// Throws Error{NotAParentSubset | CyclicGraph}.
Fiber fiber(const MixedGraph &g, const ParamMatrix &lam, Vertex v,
            const VertexSet &pinned = {});
int fiber_dimension(const MixedGraph &g, const ParamMatrix &lam, Vertex v,
                    const VertexSet &pinned = {});

/// Entries uniform on [−1,1] with (−0.05,0.05) removed.
ParamMatrix random_generic_params(const MixedGraph &g, std::uint64_t seed,
                                  std::uint64_t draw = 0);

/// Modal rank of (B_Λ)_{rows,cols} over `draws` generic parameter draws.
int modal_numeric_rank(const MixedGraph &g, const VertexSet &rows,
                       const VertexSet &cols, std::uint64_t seed, int draws = 5);

/// Modal fiber over `draws` generic draws (ties broken by the smaller
/// dimension, i.e. the generic one).
Fiber generic_fiber(const MixedGraph &g, Vertex v, const VertexSet &pinned,
                    std::uint64_t seed, int draws = 5);

/// True iff rank((B_Λ)^v) at `lam` is below the generic v-rank r^v_{pa(v)}.
bool nongeneric_locus_check(const MixedGraph &g, const ParamMatrix &lam,
                            Vertex v);

/// Maximum-flow-free identifiability oracle for graphs without bidirected
/// edges (cyclic allowed): with independent non-Gaussian errors, Λ̃ gives
/// the same distribution iff (I−Λ̃) = (I−Λ)·P·D for a permutation P and
/// diagonal D, and for generic Λ this is possible exactly for the
/// permutations π with {π(v)} ∪ pa(π(v)) ⊆ {v} ∪ pa(v) and
/// v ∈ {π(v)} ∪ pa(π(v)) for all v. Returns their count (≥ 1, the
/// identity). Throws Error{TooLarge} for more than 9 vertices and
/// Error{NotCycleDecomposable} when bidirected edges are present.
std::size_t admissible_permutations(const MixedGraph &g);

struct RankMismatch {
  Vertex vertex = -1;
  VertexSet set;
  Capacity flow = 0;
  std::size_t brute_force = 0;
  int numeric = 0;
  std::vector<std::vector<Vertex>> witness;
};

struct RankCrossCheck {
  std::size_t checks = 0;
  std::optional<RankMismatch> mismatch;
};

/// For every vertex v and every Q ⊆ pa(v): flow v-rank, exhaustive path
/// search and modal numeric rank of (B_Λ)_{Q,R_v} over `draws` generic
/// draws must coincide. Stops at the first disagreement.
RankCrossCheck cross_check_ranks(const MixedGraph &g, std::uint64_t seed,
                                 const NetworkOptions &opts = {}, int draws = 5);

/// Calls f on every ADMG with vertices v1..vp: each labelled DAG combined
/// with each bidirected edge set.
void for_each_admg(int p, const std::function<void(const MixedGraph &)> &f);

/// The index-th random graph of a verification sweep: random_admg with a
/// density drawn uniformly from [0.1, 1].
MixedGraph sampled_admg(int p, std::uint64_t seed, std::uint64_t index);

}  // namespace admgid
