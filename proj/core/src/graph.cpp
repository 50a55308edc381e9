// SPDX-License-Identifier: Apache-2.0

#include "admgid/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <unordered_set>

#include "admgid/error.hpp"

namespace admgid {

// --- VertexSet -------------------------------------------------------------

VertexSet::VertexSet(std::initializer_list<Vertex> members)
    : VertexSet(std::vector<Vertex>(members)) {}

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool VertexSet::contains(Vertex v) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), v);
}

void VertexSet::insert(Vertex v) {
  auto it = std::lower_bound(members_.begin(), members_.end(), v);
  if (it == members_.end() || *it != v)
    members_.insert(it, v);
}

void VertexSet::erase(Vertex v) {
  auto it = std::lower_bound(members_.begin(), members_.end(), v);
  if (it != members_.end() && *it == v)
    members_.erase(it);
}

bool VertexSet::is_subset_of(const VertexSet &other) const {
  return std::includes(other.begin(), other.end(), begin(), end());
}

VertexSet set_union(const VertexSet &a, const VertexSet &b) {
  std::vector<Vertex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

VertexSet set_intersection(const VertexSet &a, const VertexSet &b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return VertexSet(std::move(out));
}

VertexSet set_difference(const VertexSet &a, const VertexSet &b) {
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return VertexSet(std::move(out));
}

// --- validation ------------------------------------------------------------

void validate(const GraphSpec &spec) {
  std::unordered_set<std::string> seen;
  for (const auto &name : spec.vertices) {
    if (!seen.insert(name).second)
      throw Error(ErrorCode::DuplicateVertex, "vertex '" + name + "' declared twice");
  }
  auto check = [&](const NamedEdge &e, const char *arrow) {
    const std::string label = e.first + arrow + e.second;
    for (const auto *end : {&e.first, &e.second}) {
      if (!seen.contains(*end))
        throw Error(ErrorCode::UnknownVertex,
                    "edge " + label + " references undeclared vertex '" + *end + "'");
    }
    if (e.first == e.second)
      throw Error(ErrorCode::SelfLoop, "edge " + label);
  };
  for (const auto &e : spec.directed)
    check(e, "->");
  for (const auto &e : spec.bidirected)
    check(e, "<->");
}

// --- MixedGraph ------------------------------------------------------------

MixedGraph::MixedGraph(const GraphSpec &spec) { build(spec); }

MixedGraph::MixedGraph(std::vector<std::string> vertices,
                       std::vector<NamedEdge> directed,
                       std::vector<NamedEdge> bidirected) {
  build(GraphSpec{std::move(vertices), std::move(directed), std::move(bidirected)});
}

void MixedGraph::build(const GraphSpec &spec) {
  validate(spec);
  names_ = spec.vertices;
  for (std::size_t i = 0; i < names_.size(); ++i)
    index_.emplace(names_[i], static_cast<Vertex>(i));

  const auto p = names_.size();
  parents_.assign(p, {});
  children_.assign(p, {});
  siblings_.assign(p, {});

  std::set<Edge> directed;
  for (const auto &[u, v] : spec.directed)
    directed.emplace(index_.at(u), index_.at(v));
  std::set<Edge> bidirected;
  for (const auto &[u, v] : spec.bidirected) {
    Vertex a = index_.at(u), b = index_.at(v);
    bidirected.emplace(std::min(a, b), std::max(a, b));
  }

  directed_.assign(directed.begin(), directed.end());
  bidirected_.assign(bidirected.begin(), bidirected.end());
  for (const auto &[u, v] : directed_) {
    parents_[v].insert(u);
    children_[u].insert(v);
  }
  for (const auto &[u, v] : bidirected_) {
    siblings_[u].insert(v);
    siblings_[v].insert(u);
  }
}

Vertex MixedGraph::index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    throw Error(ErrorCode::UnknownVertex, "no vertex named '" + std::string(name) + "'");
  return it->second;
}

std::optional<Vertex> MixedGraph::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

VertexSet MixedGraph::to_set(const std::vector<std::string> &names) const {
  std::vector<Vertex> out;
  out.reserve(names.size());
  for (const auto &n : names)
    out.push_back(index(n));
  return VertexSet(std::move(out));
}

std::vector<std::string> MixedGraph::names_of(const VertexSet &set) const {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (Vertex v : set)
    out.push_back(name(v));
  return out;
}

bool MixedGraph::has_directed(Vertex u, Vertex v) const {
  return children_.at(u).contains(v);
}

bool MixedGraph::has_bidirected(Vertex u, Vertex v) const {
  return siblings_.at(u).contains(v);
}

GraphSpec MixedGraph::spec() const {
  GraphSpec s;
  s.vertices = names_;
  for (const auto &[u, v] : directed_)
    s.directed.emplace_back(names_[u], names_[v]);
  for (const auto &[u, v] : bidirected_)
    s.bidirected.emplace_back(names_[u], names_[v]);
  return s;
}

void MixedGraph::check_vertex(Vertex v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= names_.size())
    throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v));
}

// --- relations -------------------------------------------------------------

namespace {

VertexSet reach(const MixedGraph &g, Vertex start,
                const VertexSet &(MixedGraph::*next)(Vertex) const) {
  if (start < 0 || static_cast<std::size_t>(start) >= g.size())
    throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(start));
  std::vector<char> seen(g.size(), 0);
  std::vector<Vertex> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : (g.*next)(u)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i])
      out.push_back(static_cast<Vertex>(i));
  return VertexSet(std::move(out));
}

}  // namespace

VertexSet ancestors(const MixedGraph &g, Vertex v) {
  return reach(g, v, &MixedGraph::parents);
}

VertexSet descendants(const MixedGraph &g, Vertex v) {
  return reach(g, v, &MixedGraph::children);
}

Relations relations(const MixedGraph &g, Vertex v) {
  Relations r;
  r.an = ancestors(g, v);
  r.de = descendants(g, v);
  r.pa = g.parents(v);
  r.ch = g.children(v);
  r.sib = g.siblings(v);
  r.Sib = r.sib;
  r.Sib.insert(v);
  return r;
}

std::vector<Vertex> causal_order(const MixedGraph &g) {
  const auto p = g.size();
  std::vector<int> indegree(p, 0);
  for (const auto &[u, v] : g.directed_edges())
    ++indegree[v];

  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (std::size_t v = 0; v < p; ++v)
    if (indegree[v] == 0)
      ready.push(static_cast<Vertex>(v));

  std::vector<Vertex> order;
  order.reserve(p);
  while (!ready.empty()) {
    Vertex u = ready.top();
    ready.pop();
    order.push_back(u);
    for (Vertex w : g.children(u))
      if (--indegree[w] == 0)
        ready.push(w);
  }
  if (order.size() != p)
    throw Error(ErrorCode::CyclicGraph, "directed part contains a cycle");
  return order;
}

bool is_acyclic(const MixedGraph &g) {
  try {
    causal_order(g);
    return true;
  } catch (const Error &) {
    return false;
  }
}

std::vector<VertexSet> bidirected_connected_components(const MixedGraph &g) {
  std::vector<int> component(g.size(), -1);
  std::vector<VertexSet> out;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (component[s] >= 0)
      continue;
    const int id = static_cast<int>(out.size());
    std::vector<Vertex> members;
    std::vector<Vertex> stack{static_cast<Vertex>(s)};
    component[s] = id;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (Vertex w : g.siblings(u)) {
        if (component[w] < 0) {
          component[w] = id;
          stack.push_back(w);
        }
      }
    }
    out.emplace_back(std::move(members));
  }
  return out;
}

std::vector<VertexSet> strongly_connected_components(const MixedGraph &g) {
  // Tarjan; components pop in reverse topological order of the condensation.
  const auto p = static_cast<int>(g.size());
  std::vector<int> index(p, -1), low(p, 0);
  std::vector<char> on_stack(p, 0);
  std::vector<Vertex> stack;
  std::vector<VertexSet> out;
  int counter = 0;

  std::function<void(Vertex)> visit = [&](Vertex v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (Vertex w : g.children(v)) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<Vertex> members;
      Vertex w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        members.push_back(w);
      } while (w != v);
      out.emplace_back(std::move(members));
    }
  };
  for (Vertex v = 0; v < p; ++v)
    if (index[v] < 0)
      visit(v);
  std::reverse(out.begin(), out.end());
  return out;
}

// --- LatentFactorGraph -----------------------------------------------------

LatentFactorGraph::LatentFactorGraph(std::vector<std::string> observed,
                                     std::vector<std::string> latents,
                                     std::vector<NamedEdge> loadings,
                                     std::optional<std::vector<double>> weights)
    : observed_(std::move(observed)), latents_(std::move(latents)),
      weights_(std::move(weights)) {
  std::unordered_map<std::string, int> obs, lat;
  for (std::size_t i = 0; i < observed_.size(); ++i)
    if (!obs.emplace(observed_[i], static_cast<int>(i)).second)
      throw Error(ErrorCode::DuplicateVertex, "vertex '" + observed_[i] + "' declared twice");
  for (std::size_t i = 0; i < latents_.size(); ++i) {
    if (obs.contains(latents_[i]))
      throw Error(ErrorCode::InvalidFactorGraph,
                  "latent '" + latents_[i] + "' is also an observed vertex");
    if (!lat.emplace(latents_[i], static_cast<int>(i)).second)
      throw Error(ErrorCode::DuplicateVertex, "latent '" + latents_[i] + "' declared twice");
  }
  if (weights_ && weights_->size() != loadings.size())
    throw Error(ErrorCode::InvalidFactorGraph,
                "weights has " + std::to_string(weights_->size()) + " entries for " +
                    std::to_string(loadings.size()) + " loadings");

  children_.assign(latents_.size(), {});
  for (const auto &[from, to] : loadings) {
    const std::string label = from + "->" + to;
    const bool from_obs = obs.contains(from), to_lat = lat.contains(to);
    if (from_obs || to_lat)
      throw Error(ErrorCode::InvalidFactorGraph,
                  "loading " + label + " must run from a latent to an observed vertex");
    if (!lat.contains(from))
      throw Error(ErrorCode::UnknownVertex, "loading " + label + " references '" + from + "'");
    if (!obs.contains(to))
      throw Error(ErrorCode::UnknownVertex, "loading " + label + " references '" + to + "'");
    const int l = lat.at(from);
    const Vertex v = obs.at(to);
    loadings_.push_back({l, v});
    children_[l].insert(v);
  }
}

Vertex LatentFactorGraph::observed_index(std::string_view name) const {
  for (std::size_t i = 0; i < observed_.size(); ++i)
    if (observed_[i] == name)
      return static_cast<Vertex>(i);
  throw Error(ErrorCode::UnknownVertex, "no observed vertex '" + std::string(name) + "'");
}

MixedGraph latent_projection_bidirected(const LatentFactorGraph &l) {
  std::set<Edge> edges;
  for (std::size_t k = 0; k < l.latents().size(); ++k) {
    const auto &ch = l.children(static_cast<int>(k)).members();
    for (std::size_t i = 0; i < ch.size(); ++i)
      for (std::size_t j = i + 1; j < ch.size(); ++j)
        edges.emplace(ch[i], ch[j]);
  }
  std::vector<NamedEdge> bidirected;
  for (const auto &[u, v] : edges)
    bidirected.emplace_back(l.observed()[u], l.observed()[v]);
  return MixedGraph(l.observed(), {}, std::move(bidirected));
}

}  // namespace admgid
