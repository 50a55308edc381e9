// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the unit and acceptance tests.
#pragma once

#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "admgid/graph.hpp"
#include "admgid/io.hpp"
#include "admgid/params.hpp"

namespace admgid::testing {

inline std::string data_path(const std::string &rel) {
  return std::string(ADMGID_DATA_DIR) + "/" + rel;
}

inline std::string graph_path(const std::string &name) {
  return data_path("graphs/" + name + ".json");
}

inline MixedGraph load_graph(const std::string &name) {
  return load_graph_document(graph_path(name)).graph;
}

inline GraphDocument load_document(const std::string &name) {
  return load_graph_document(graph_path(name));
}

inline VertexSet vs(const MixedGraph &g, const std::vector<std::string> &names) {
  return g.to_set(names);
}

inline ParamMatrix params(const MixedGraph &g,
                          const std::vector<std::tuple<std::string, std::string, double>> &values) {
  ParamMatrix lam(g);
  for (const auto &[u, v, x] : values)
    lam.set(g.index(u), g.index(v), x);
  return lam;
}

/// Every subset of `s`, in binary-counter order.
inline std::vector<VertexSet> subsets(const VertexSet &s) {
  const auto &m = s.members();
  std::vector<VertexSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m.size()); ++mask) {
    std::vector<Vertex> pick;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (mask >> i & 1)
        pick.push_back(m[i]);
    out.emplace_back(std::move(pick));
  }
  return out;
}

}  // namespace admgid::testing
