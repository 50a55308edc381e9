// SPDX-License-Identifier: Apache-2.0

#include "admgid/ident.hpp"

#include <algorithm>
#include <functional>

#include "admgid/error.hpp"

namespace admgid {

namespace {

void require_vertex(const MixedGraph &g, Vertex v) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.size())
    throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v));
}

void require_parent_subset(const MixedGraph &g, Vertex v, const VertexSet &q,
                           const char *what) {
  if (!q.is_subset_of(g.parents(v))) {
    std::string names;
    for (Vertex u : set_difference(q, g.parents(v)))
      names += (names.empty() ? "" : ",") + g.name(u);
    throw Error(ErrorCode::NotAParentSubset,
                std::string(what) + " contains non-parents of " + g.name(v) + ": " + names);
  }
}

void require_acyclic(const MixedGraph &g) {
  if (!is_acyclic(g))
    throw Error(ErrorCode::CyclicGraph,
                "criterion requires an acyclic graph; use the cyclic checks");
}

}  // namespace

VertexSet removable_ancestors(const MixedGraph &g, Vertex v) {
  require_vertex(g, v);
  const VertexSet an = ancestors(g, v);
  VertexSet sib_v = g.siblings(v);
  sib_v.insert(v);
  std::vector<Vertex> out;
  for (Vertex u : an) {
    if (u == v)
      continue;
    VertexSet sib_u = g.siblings(u);
    sib_u.insert(u);
    if (!set_difference(sib_u, sib_v).empty())
      out.push_back(u);
  }
  return VertexSet(std::move(out));
}

VertexFlowNetwork build_flow_network(const MixedGraph &g, Vertex v,
                                     const VertexSet &q,
                                     const NetworkOptions &opts) {
  require_vertex(g, v);
  require_parent_subset(g, v, q, "sink set");

  VertexFlowNetwork out;
  out.target = v;
  out.big_m = static_cast<Capacity>(g.size()) + 1;
  out.in_node.assign(g.size(), -1);
  out.out_node.assign(g.size(), -1);

  FlowNetwork &net = out.network;
  net = FlowNetwork("s_" + g.name(v), "t_" + g.name(v));

  VertexSet inner = ancestors(g, v);
  inner.erase(v);
  for (Vertex u : inner) {
    out.in_node[u] = net.add_node(g.name(u) + ".in");
    out.out_node[u] = net.add_node(g.name(u) + ".out");
    net.add_arc(out.in_node[u], out.out_node[u], opts.node_capacity);
  }
  for (Vertex u : removable_ancestors(g, v))
    net.add_arc(net.source(), out.in_node[u], out.big_m);
  for (const auto &[a, b] : g.directed_edges())
    if (inner.contains(a) && inner.contains(b))
      net.add_arc(out.out_node[a], out.in_node[b], out.big_m);
  for (Vertex u : q)
    net.add_arc(out.out_node[u], net.sink(), out.big_m);
  return out;
}

std::vector<std::vector<Vertex>> flow_witness(const VertexFlowNetwork &net,
                                              const FlowResult &flow) {
  std::vector<int> owner(net.network.node_count(), -1);
  for (std::size_t u = 0; u < net.in_node.size(); ++u) {
    if (net.in_node[u] >= 0) {
      owner[net.in_node[u]] = static_cast<int>(u);
      owner[net.out_node[u]] = static_cast<int>(u);
    }
  }
  std::vector<std::vector<Vertex>> paths;
  for (const auto &nodes : decompose_unit_paths(net.network, flow)) {
    std::vector<Vertex> path;
    for (int node : nodes) {
      const int u = owner[node];
      if (u >= 0 && (path.empty() || path.back() != u))
        path.push_back(u);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

Capacity v_rank(const MixedGraph &g, Vertex v, const VertexSet &q,
                const NetworkOptions &opts) {
  return max_flow(build_flow_network(g, v, q, opts).network).value;
}

bool is_identifiable(const MixedGraph &g, Vertex v, const VertexSet &q) {
  return is_identifiable_with_knowledge(g, v, q, {});
}

bool is_identifiable_with_knowledge(const MixedGraph &g, Vertex v,
                                    const VertexSet &q, const VertexSet &k) {
  require_vertex(g, v);
  require_acyclic(g);
  require_parent_subset(g, v, q, "target set");
  require_parent_subset(g, v, k, "known set");

  const VertexSet &pa = g.parents(v);
  const Capacity lhs = v_rank(g, v, set_difference(pa, set_union(k, q)));
  const Capacity rhs = v_rank(g, v, set_difference(pa, k)) -
                       static_cast<Capacity>(set_union(q, k).size()) +
                       static_cast<Capacity>(k.size());
  return lhs == rhs;
}

bool IdentReport::all_identifiable() const {
  return std::all_of(columns.begin(), columns.end(),
                     [](const ColumnReport &c) { return c.identifiable; });
}

IdentReport is_matrix_identifiable(const MixedGraph &g, std::string graph_id) {
  require_acyclic(g);
  IdentReport report;
  report.graph_id = std::move(graph_id);

  std::vector<Capacity> full_rank(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = static_cast<Vertex>(i);
    ColumnReport col;
    col.vertex = v;
    col.parents = g.parents(v);
    col.removable = removable_ancestors(g, v);
    const auto net = build_flow_network(g, v, col.parents);
    const auto flow = max_flow(net.network);
    col.rank = flow.value;
    col.identifiable = col.rank == static_cast<Capacity>(col.parents.size());
    col.witness = flow_witness(net, flow);
    full_rank[i] = col.rank;
    report.columns.push_back(std::move(col));
  }

  for (const auto &[u, v] : g.directed_edges()) {
    VertexSet rest = g.parents(v);
    rest.erase(u);
    const bool ok = v_rank(g, v, rest) == full_rank[v] - 1;
    report.edges.push_back({u, v, ok});
  }
  return report;
}

bool is_globally_identifiable(const MixedGraph &g, const NetworkOptions &opts) {
  require_acyclic(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = static_cast<Vertex>(i);
    const auto &pa = g.parents(v);
    if (pa.empty())
      continue;
    if (v_rank(g, v, pa, opts) != static_cast<Capacity>(pa.size()))
      return false;
  }
  return true;
}

std::vector<bool> cyclic_necessary_condition(const MixedGraph &g) {
  std::vector<bool> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = static_cast<Vertex>(i);
    const auto &pa = g.parents(v);
    out[i] = v_rank(g, v, pa) == static_cast<Capacity>(pa.size());
  }
  return out;
}

std::vector<std::vector<Vertex>> cycle_decomposition(const MixedGraph &g) {
  if (!g.bidirected_edges().empty())
    throw Error(ErrorCode::NotCycleDecomposable,
                "cycle decomposition requires an empty bidirected part");
  std::vector<std::vector<Vertex>> cycles;
  for (const auto &scc : strongly_connected_components(g)) {
    auto describe = [&] {
      std::string s = "{";
      for (Vertex u : scc)
        s += (s.size() > 1 ? "," : "") + g.name(u);
      return s + "}";
    };
    if (scc.size() < 2)
      throw Error(ErrorCode::NotCycleDecomposable,
                  "component " + describe() + " is not a directed cycle");
    for (Vertex u : scc) {
      if (set_intersection(g.parents(u), scc).size() != 1 ||
          set_intersection(g.children(u), scc).size() != 1)
        throw Error(ErrorCode::NotCycleDecomposable,
                    "component " + describe() + " is not a simple cycle");
    }
    std::vector<Vertex> cycle{*scc.begin()};
    for (std::size_t k = 1; k < scc.size(); ++k)
      cycle.push_back(*set_intersection(g.children(cycle.back()), scc).begin());
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

std::optional<std::pair<Vertex, Vertex>>
offending_two_cycle(const MixedGraph &g) {
  for (const auto &cycle : cycle_decomposition(g)) {
    if (cycle.size() != 2)
      continue;
    const VertexSet c{cycle[0], cycle[1]};
    if (set_difference(g.parents(cycle[0]), c) ==
        set_difference(g.parents(cycle[1]), c))
      return std::make_pair(std::min(cycle[0], cycle[1]),
                            std::max(cycle[0], cycle[1]));
  }
  return std::nullopt;
}

bool cycle_decomposition_identifiable(const MixedGraph &g) {
  return !offending_two_cycle(g).has_value();
}

std::vector<EdgeGenericity> genericity_sufficient(const LatentFactorGraph &l) {
  const MixedGraph projected = latent_projection_bidirected(l);

  std::vector<std::size_t> component_size(projected.size());
  for (const auto &comp : bidirected_connected_components(projected))
    for (Vertex u : comp)
      component_size[u] = comp.size();

  std::vector<const VertexSet *> loaded;
  for (std::size_t k = 0; k < l.latents().size(); ++k) {
    const auto &ch = l.children(static_cast<int>(k));
    if (!ch.empty())
      loaded.push_back(&ch);
  }
  auto latent_count = [&](const VertexSet &clique) {
    return static_cast<std::size_t>(
        std::count_if(loaded.begin(), loaded.end(),
                      [&](const VertexSet *ch) { return ch->is_subset_of(clique); }));
  };

  std::vector<EdgeGenericity> out;
  for (const auto &[u, v] : projected.bidirected_edges()) {
    if (component_size[u] > kMaxCliqueComponent)
      throw Error(ErrorCode::TooLarge,
                  "bidirected component of size " + std::to_string(component_size[u]) +
                      " exceeds the clique-search limit");
    EdgeGenericity result{u, v, false, {}};
    const auto common = set_intersection(projected.siblings(u), projected.siblings(v)).members();

    std::function<bool(VertexSet &, std::size_t)> extend =
        [&](VertexSet &clique, std::size_t from) -> bool {
      if (latent_count(clique) + 1 >= clique.size()) {
        result.sufficient = true;
        result.clique = clique;
        return true;
      }
      for (std::size_t i = from; i < common.size(); ++i) {
        const Vertex c = common[i];
        const bool adjacent = std::all_of(clique.begin(), clique.end(), [&](Vertex m) {
          return projected.has_bidirected(m, c);
        });
        if (!adjacent)
          continue;
        clique.insert(c);
        if (extend(clique, i + 1))
          return true;
        clique.erase(c);
      }
      return false;
    };
    VertexSet clique{u, v};
    extend(clique, 0);
    out.push_back(std::move(result));
  }
  return out;
}

}  // namespace admgid
