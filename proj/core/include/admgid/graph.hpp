// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace admgid {

/// Dense vertex index, assigned by input order.
using Vertex = int;

using NamedEdge = std::pair<std::string, std::string>;
using Edge = std::pair<Vertex, Vertex>;

/// Sorted set of vertex indices.
class VertexSet {
public:
  using const_iterator = std::vector<Vertex>::const_iterator;

  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> members);
  explicit VertexSet(std::vector<Vertex> members);

  bool contains(Vertex v) const noexcept;
  void insert(Vertex v);
  void erase(Vertex v);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const_iterator begin() const noexcept { return members_.begin(); }
  const_iterator end() const noexcept { return members_.end(); }
  const std::vector<Vertex> &members() const noexcept { return members_; }

  bool is_subset_of(const VertexSet &other) const;

  friend bool operator==(const VertexSet &, const VertexSet &) = default;

private:
  std::vector<Vertex> members_;
};

VertexSet set_union(const VertexSet &a, const VertexSet &b);
VertexSet set_intersection(const VertexSet &a, const VertexSet &b);
VertexSet set_difference(const VertexSet &a, const VertexSet &b);

/// Raw, unvalidated description of a mixed graph in terms of vertex names.
struct GraphSpec {
  std::vector<std::string> vertices;
  std::vector<NamedEdge> directed;
  std::vector<NamedEdge> bidirected;
};

/// Throws Error{SelfLoop | UnknownVertex | DuplicateVertex} naming the
/// offending element.
void validate(const GraphSpec &spec);

/// G = (V, E->, E<->). Immutable once built; construction validates.
/// Duplicate edges collapse; bidirected pairs are stored with u < v.
class MixedGraph {
public:
  MixedGraph() = default;
  explicit MixedGraph(const GraphSpec &spec);
  MixedGraph(std::vector<std::string> vertices, std::vector<NamedEdge> directed,
             std::vector<NamedEdge> bidirected);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string> &vertices() const noexcept { return names_; }
  const std::string &name(Vertex v) const { return names_.at(v); }

  /// Throws Error{UnknownVertex}.
  Vertex index(std::string_view name) const;
  std::optional<Vertex> find(std::string_view name) const;
  VertexSet to_set(const std::vector<std::string> &names) const;
  std::vector<std::string> names_of(const VertexSet &set) const;

  const std::vector<Edge> &directed_edges() const noexcept { return directed_; }
  const std::vector<Edge> &bidirected_edges() const noexcept {
    return bidirected_;
  }

  const VertexSet &parents(Vertex v) const { return parents_.at(v); }
  const VertexSet &children(Vertex v) const { return children_.at(v); }
  const VertexSet &siblings(Vertex v) const { return siblings_.at(v); }

  bool has_directed(Vertex u, Vertex v) const;
  bool has_bidirected(Vertex u, Vertex v) const;

  GraphSpec spec() const;

private:
  void build(const GraphSpec &spec);
  void check_vertex(Vertex v) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<Edge> directed_;
  std::vector<Edge> bidirected_;
  std::vector<VertexSet> parents_;
  std::vector<VertexSet> children_;
  std::vector<VertexSet> siblings_;
};

/// Genealogical relations of a single vertex. an and de include v itself
/// (trivial paths); Sib = sib ∪ {v}.
struct Relations {
  VertexSet pa;
  VertexSet ch;
  VertexSet an;
  VertexSet de;
  VertexSet sib;
  VertexSet Sib;
};

VertexSet ancestors(const MixedGraph &g, Vertex v);
VertexSet descendants(const MixedGraph &g, Vertex v);
Relations relations(const MixedGraph &g, Vertex v);

bool is_acyclic(const MixedGraph &g);

/// Kahn's algorithm; among ready vertices the lowest input index goes first.
/// Throws Error{CyclicGraph}.
std::vector<Vertex> causal_order(const MixedGraph &g);

/// Partition of V by connectivity in the bidirected part, each component
/// sorted, components ordered by their smallest member.
std::vector<VertexSet> bidirected_connected_components(const MixedGraph &g);

/// Strongly connected components of the directed part, in a topological
/// order of the condensation (sources first).
std::vector<VertexSet> strongly_connected_components(const MixedGraph &g);

/// Pure factor form: latents are sources and load only onto observed
/// vertices. Observed vertices keep the indices of the bound MixedGraph;
/// latents are indexed 0..latents.size()-1 separately.
class LatentFactorGraph {
public:
  struct Loading {
    int latent;
    Vertex observed;
  };

  LatentFactorGraph() = default;
  /// Throws Error{InvalidFactorGraph} when a loading does not run
  /// latent -> observed, Error{UnknownVertex} for undeclared names.
  LatentFactorGraph(std::vector<std::string> observed,
                    std::vector<std::string> latents,
                    std::vector<NamedEdge> loadings,
                    std::optional<std::vector<double>> weights = std::nullopt);

  const std::vector<std::string> &observed() const noexcept {
    return observed_;
  }
  const std::vector<std::string> &latents() const noexcept { return latents_; }
  const std::vector<Loading> &loadings() const noexcept { return loadings_; }
  const std::optional<std::vector<double>> &weights() const noexcept {
    return weights_;
  }

  /// ch(l) as observed indices.
  const VertexSet &children(int latent) const { return children_.at(latent); }

  Vertex observed_index(std::string_view name) const;

private:
  std::vector<std::string> observed_;
  std::vector<std::string> latents_;
  std::vector<Loading> loadings_;
  std::optional<std::vector<double>> weights_;
  std::vector<VertexSet> children_;
};

/// Bidirected edge u<->v iff some latent has both as children. The result
/// has no directed edges.
MixedGraph latent_projection_bidirected(const LatentFactorGraph &l);

}  // namespace admgid
