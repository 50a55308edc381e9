// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace admgid {

using Capacity = std::int64_t;

/// Capacitated digraph with a designated source and sink. Node ids are
/// dense; arcs keep insertion order, which fixes every tie-break below.
class FlowNetwork {
public:
  struct Arc {
    int from;
    int to;
    Capacity capacity;
  };

  /// Creates the network with nodes 0 = source and 1 = sink.
  FlowNetwork(std::string source_label = "s", std::string sink_label = "t");

  int add_node(std::string label);
  /// Returns the arc id.
  int add_arc(int from, int to, Capacity capacity);

  int source() const noexcept { return 0; }
  int sink() const noexcept { return 1; }
  int node_count() const noexcept { return static_cast<int>(labels_.size()); }
  const std::string &label(int node) const { return labels_.at(node); }
  const std::vector<Arc> &arcs() const noexcept { return arcs_; }

private:
  std::vector<std::string> labels_;
  std::vector<Arc> arcs_;
};

struct FlowResult {
  Capacity value = 0;
  /// Flow on each arc, indexed like FlowNetwork::arcs().
  std::vector<Capacity> arc_flow;
};

/// Maximum integral s-t flow by Dinitz's algorithm (BFS level graph plus
/// blocking flow). Deterministic for a fixed network.
FlowResult max_flow(const FlowNetwork &net);

/// Splits an integral flow into unit s-t walks, each a node sequence from
/// source to sink. At every node the lowest-id arc with remaining flow is
/// taken first. Circulations not reachable from the source are dropped.
std::vector<std::vector<int>> decompose_unit_paths(const FlowNetwork &net,
                                                   const FlowResult &flow);

}  // namespace admgid
