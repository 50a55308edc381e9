// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "admgid/flow.hpp"
#include "admgid/graph.hpp"

namespace admgid {

/// R_v = {u in an(v) : Sib(u) \ Sib(v) != ∅}. Never contains v.
VertexSet removable_ancestors(const MixedGraph &g, Vertex v);

struct NetworkOptions {
  /// Capacity of each split arc v_in -> v_out. Anything other than 1 breaks
  /// the path-system correspondence; `admgid verify --inject-fault` uses it
  /// to exercise the cross-checks.
  Capacity node_capacity = 1;
};

/// G^v_Q with node splitting. Keeps the mapping back to graph vertices.
struct VertexFlowNetwork {
  FlowNetwork network;
  Vertex target = -1;
  /// Graph vertex -> in/out node ids, -1 when the vertex is not in an(v)\{v}.
  std::vector<int> in_node;
  std::vector<int> out_node;
  /// "Unbounded" capacity used on source, sink and edge arcs: |V| + 1.
  Capacity big_m = 0;
};

/// Nodes an(v)\{v} (split), source arcs to R_v, sink arcs from q, and the
/// directed edges of g with both endpoints in an(v)\{v}.
/// Throws Error{UnknownVertex | NotAParentSubset}.
VertexFlowNetwork build_flow_network(const MixedGraph &g, Vertex v,
                                     const VertexSet &q,
                                     const NetworkOptions &opts = {});

/// Vertex paths (source vertex in R_v first, sink-side vertex in q last)
/// read off a maximum flow.
std::vector<std::vector<Vertex>> flow_witness(const VertexFlowNetwork &net,
                                              const FlowResult &flow);

/// r^v_q: maximum size of a non-intersecting path system from R_v into q.
Capacity v_rank(const MixedGraph &g, Vertex v, const VertexSet &q,
                const NetworkOptions &opts = {});

/// λ_{q,v} generically identifiable iff r^v_{pa(v)\q} = r^v_{pa(v)} - |q|.
/// Throws Error{CyclicGraph | NotAParentSubset}.
bool is_identifiable(const MixedGraph &g, Vertex v, const VertexSet &q);

/// Same question when λ_{k,v} is already known:
/// r^v_{pa(v)\(k∪q)} = r^v_{pa(v)\k} - |q∪k| + |k|.
bool is_identifiable_with_knowledge(const MixedGraph &g, Vertex v,
                                    const VertexSet &q, const VertexSet &k);

struct ColumnReport {
  Vertex vertex = -1;
  VertexSet parents;
  VertexSet removable;
  Capacity rank = 0;
  bool identifiable = false;
  std::vector<std::vector<Vertex>> witness;
};

struct EdgeReport {
  Vertex from = -1;
  Vertex to = -1;
  bool identifiable = false;
};

struct IdentReport {
  std::string graph_id;
  std::vector<ColumnReport> columns;
  std::vector<EdgeReport> edges;

  bool all_identifiable() const;
};

/// Column and edge verdicts for an acyclic graph. Throws Error{CyclicGraph}.
IdentReport is_matrix_identifiable(const MixedGraph &g,
                                   std::string graph_id = {});

/// Cheaper check of the global criterion only: one max flow per vertex,
/// no witnesses or edge verdicts.
bool is_globally_identifiable(const MixedGraph &g,
                              const NetworkOptions &opts = {});

/// Per vertex: does a non-intersecting system from R_v onto all of pa(v)
/// exist. A false entry certifies that Λ is not identifiable; valid for
/// cyclic graphs too.
std::vector<bool> cyclic_necessary_condition(const MixedGraph &g);

/// Vertex-disjoint simple directed cycles covering V, in an order where
/// every cycle's outside parents lie in earlier cycles.
/// Throws Error{NotCycleDecomposable} naming the offending component.
std::vector<std::vector<Vertex>> cycle_decomposition(const MixedGraph &g);

/// For graphs without bidirected edges that decompose into cycles: Λ is
/// identifiable iff no 2-cycle C = {a, b} has pa(a)\C = pa(b)\C (then
/// also = pa(C)\C). A lone 2-cycle is therefore not identifiable while
/// k-cycles with k >= 3 are.
/// Throws Error{NotCycleDecomposable}.
bool cycle_decomposition_identifiable(const MixedGraph &g);

/// The first 2-cycle responsible for non-identifiability, if any.
std::optional<std::pair<Vertex, Vertex>>
offending_two_cycle(const MixedGraph &g);

struct EdgeGenericity {
  Vertex u = -1;
  Vertex v = -1;
  bool sufficient = false;
  /// A clique C ⊇ {u, v} with |L_C| >= |C| - 1 when one exists.
  VertexSet clique;
};

/// Largest bidirected component the clique search accepts.
inline constexpr std::size_t kMaxCliqueComponent = 20;

/// For every projected edge u<->v, searches cliques C ⊇ {u, v} of the
/// projected bidirected graph for |{l : ch(l) ⊆ C}| >= |C| - 1.
/// Throws Error{TooLarge} beyond kMaxCliqueComponent.
std::vector<EdgeGenericity> genericity_sufficient(const LatentFactorGraph &l);

}  // namespace admgid
