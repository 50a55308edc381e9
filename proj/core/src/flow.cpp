// SPDX-License-Identifier: Apache-2.0

#include "admgid/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "admgid/error.hpp"

namespace admgid {

FlowNetwork::FlowNetwork(std::string source_label, std::string sink_label) {
  labels_.push_back(std::move(source_label));
  labels_.push_back(std::move(sink_label));
}

int FlowNetwork::add_node(std::string label) {
  labels_.push_back(std::move(label));
  return node_count() - 1;
}

int FlowNetwork::add_arc(int from, int to, Capacity capacity) {
  if (from < 0 || from >= node_count() || to < 0 || to >= node_count())
    throw Error(ErrorCode::UnknownVertex, "arc endpoint out of range");
  if (capacity < 0)
    throw Error(ErrorCode::SizeMismatch, "negative arc capacity");
  arcs_.push_back({from, to, capacity});
  return static_cast<int>(arcs_.size()) - 1;
}

namespace {

// Residual graph with paired forward/backward entries: edge 2k is arc k,
// edge 2k+1 its reverse.
class Dinitz {
public:
  explicit Dinitz(const FlowNetwork &net)
      : n_(net.node_count()), head_(n_), level_(n_), cursor_(n_) {
    to_.reserve(2 * net.arcs().size());
    for (const auto &arc : net.arcs()) {
      add(arc.from, arc.to, arc.capacity);
      add(arc.to, arc.from, 0);
    }
  }

  Capacity run(int s, int t) {
    Capacity total = 0;
    while (build_levels(s, t)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      while (Capacity pushed = push(s, t, std::numeric_limits<Capacity>::max()))
        total += pushed;
    }
    return total;
  }

  Capacity flow_on(int arc) const { return residual_[2 * arc + 1]; }

private:
  void add(int from, int to, Capacity cap) {
    head_[from].push_back(static_cast<int>(to_.size()));
    to_.push_back(to);
    residual_.push_back(cap);
  }

  bool build_levels(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> queue;
    level_[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (int e : head_[u]) {
        if (residual_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          queue.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  Capacity push(int u, int t, Capacity limit) {
    if (u == t)
      return limit;
    for (auto &i = cursor_[u]; i < head_[u].size(); ++i) {
      const int e = head_[u][i];
      const int w = to_[e];
      if (residual_[e] <= 0 || level_[w] != level_[u] + 1)
        continue;
      if (Capacity got = push(w, t, std::min(limit, residual_[e]))) {
        residual_[e] -= got;
        residual_[e ^ 1] += got;
        return got;
      }
    }
    return 0;
  }

  int n_;
  std::vector<std::vector<int>> head_;
  std::vector<int> to_;
  std::vector<Capacity> residual_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace

FlowResult max_flow(const FlowNetwork &net) {
  Dinitz solver(net);
  FlowResult result;
  result.value = solver.run(net.source(), net.sink());
  result.arc_flow.resize(net.arcs().size());
  for (std::size_t k = 0; k < net.arcs().size(); ++k)
    result.arc_flow[k] = solver.flow_on(static_cast<int>(k));
  return result;
}

std::vector<std::vector<int>> decompose_unit_paths(const FlowNetwork &net,
                                                   const FlowResult &flow) {
  std::vector<Capacity> remaining = flow.arc_flow;
  std::vector<std::vector<int>> out_arcs(net.node_count());
  for (std::size_t k = 0; k < net.arcs().size(); ++k)
    out_arcs[net.arcs()[k].from].push_back(static_cast<int>(k));

  std::vector<std::vector<int>> paths;
  for (Capacity unit = 0; unit < flow.value; ++unit) {
    std::vector<int> path{net.source()};
    std::vector<int> used;
    int u = net.source();
    // Each step consumes one unit on an arc; bounded by total flow mass.
    while (u != net.sink()) {
      int next_arc = -1;
      for (int k : out_arcs[u]) {
        if (remaining[k] > 0) {
          next_arc = k;
          break;
        }
      }
      if (next_arc < 0)
        break;
      --remaining[next_arc];
      used.push_back(next_arc);
      u = net.arcs()[next_arc].to;
      path.push_back(u);
    }
    if (u != net.sink())
      break;
    // Drop any cycle the walk picked up so each path is simple.
    std::vector<int> simple;
    for (int node : path) {
      auto it = std::find(simple.begin(), simple.end(), node);
      if (it != simple.end())
        simple.erase(it + 1, simple.end());
      else
        simple.push_back(node);
    }
    paths.push_back(std::move(simple));
  }
  return paths;
}

}  // namespace admgid
