// SPDX-License-Identifier: Apache-2.0

#include "admgid/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "admgid/error.hpp"
#include "admgid/ident.hpp"
#include "admgid/random.hpp"
#include "admgid/simulate.hpp"

namespace admgid {

PathMatrix path_matrix(const ParamMatrix &lam) {
  const auto p = static_cast<Eigen::Index>(lam.size());
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p) - lam.matrix();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double det = p == 0 ? 1.0 : lu.determinant();
  if (!(std::abs(det) >= kSingularTolerance))
    throw Error(ErrorCode::SingularMatrix,
                "det(I - Lambda) = " + std::to_string(det));
  return lu.inverse().transpose();
}

int numeric_rank(const Eigen::MatrixXd &m, double tol) {
  if (m.size() == 0)
    return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0)
    return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0])
      ++rank;
  return rank;
}

namespace {

class PathSearch {
public:
  PathSearch(const MixedGraph &g, const VertexSet &sources,
             const VertexSet &targets, const VertexSet *allowed,
             std::size_t limit)
      : g_(g), sources_(sources.members()), targets_(targets),
        allowed_(allowed), limit_(limit), used_(g.size(), false),
        target_taken_(g.size(), false) {}

  std::vector<PathSystem> run() {
    for (Vertex s : sources_) {
      if (allowed_ && !allowed_->contains(s))
        return {};
      used_[s] = true;
    }
    current_.resize(sources_.size());
    place(0);
    return std::move(found_);
  }

private:
  bool done() const { return limit_ > 0 && found_.size() >= limit_; }

  void tick() {
    if (++states_ > kMaxPathStates)
      throw Error(ErrorCode::TooLarge, "path enumeration exceeded " +
                                           std::to_string(kMaxPathStates) +
                                           " partial states");
  }

  void place(std::size_t k) {
    if (k == sources_.size()) {
      found_.push_back(current_);
      return;
    }
    current_[k] = {sources_[k]};
    extend(k, sources_[k]);
  }

  void extend(std::size_t k, Vertex u) {
    tick();
    if (done())
      return;
    if (targets_.contains(u)) {
      // A target cannot be passed through: it must end some path.
      if (!target_taken_[u]) {
        target_taken_[u] = true;
        place(k + 1);
        target_taken_[u] = false;
      }
      return;
    }
    for (Vertex c : g_.children(u)) {
      if (used_[c] || (allowed_ && !allowed_->contains(c)))
        continue;
      used_[c] = true;
      current_[k].push_back(c);
      extend(k, c);
      current_[k].pop_back();
      used_[c] = false;
      if (done())
        return;
    }
  }

  const MixedGraph &g_;
  std::vector<Vertex> sources_;
  const VertexSet &targets_;
  const VertexSet *allowed_;
  std::size_t limit_;
  std::vector<bool> used_;
  std::vector<bool> target_taken_;
  PathSystem current_;
  std::vector<PathSystem> found_;
  std::size_t states_ = 0;
};

// Calls f on every k-subset of `set` until f returns true.
bool any_subset(const std::vector<Vertex> &set, std::size_t k,
                const std::function<bool(const VertexSet &)> &f) {
  std::vector<Vertex> pick;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
    if (pick.size() == k)
      return f(VertexSet(pick));
    for (std::size_t i = from; i + (k - pick.size()) <= set.size(); ++i) {
      pick.push_back(set[i]);
      if (rec(i + 1))
        return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0);
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd &m, const VertexSet &rows,
                          const VertexSet &cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  Eigen::Index i = 0;
  for (Vertex r : rows) {
    Eigen::Index j = 0;
    for (Vertex c : cols)
      out(i, j++) = m(r, c);
    ++i;
  }
  return out;
}

int permutation_sign(const std::vector<int> &perm) {
  int sign = 1;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i])
      continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0)
      sign = -sign;
  }
  return sign;
}

}  // namespace

std::vector<PathSystem> enumerate_path_systems(const MixedGraph &g,
                                               const VertexSet &sources,
                                               const VertexSet &targets,
                                               const VertexSet *allowed,
                                               std::size_t limit) {
  if (sources.size() != targets.size())
    throw Error(ErrorCode::SizeMismatch, "path systems need |I| = |P|");
  for (Vertex u : set_union(sources, targets))
    if (u < 0 || static_cast<std::size_t>(u) >= g.size())
      throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(u));
  return PathSearch(g, sources, targets, allowed, limit).run();
}

std::size_t max_path_system_size(const MixedGraph &g, const VertexSet &sources,
                                 const VertexSet &targets,
                                 const VertexSet *allowed) {
  for (std::size_t k = std::min(sources.size(), targets.size()); k > 0; --k) {
    const bool hit = any_subset(sources.members(), k, [&](const VertexSet &i) {
      return any_subset(targets.members(), k, [&](const VertexSet &p) {
        return !enumerate_path_systems(g, i, p, allowed, 1).empty();
      });
    });
    if (hit)
      return k;
  }
  return 0;
}

std::size_t brute_force_v_rank(const MixedGraph &g, Vertex v, const VertexSet &q) {
  VertexSet inner = ancestors(g, v);
  inner.erase(v);
  return max_path_system_size(g, removable_ancestors(g, v), q, &inner);
}

GvlValues gvl_check(const MixedGraph &g, const ParamMatrix &lam,
                    const VertexSet &rows, const VertexSet &cols) {
  if (rows.size() != cols.size())
    throw Error(ErrorCode::SizeMismatch, "GVL minor must be square");
  if (g.size() > kMaxGvlVertices)
    throw Error(ErrorCode::TooLarge, "GVL check limited to " +
                                         std::to_string(kMaxGvlVertices) + " vertices");
  if (!is_acyclic(g))
    throw Error(ErrorCode::CyclicGraph, "GVL path sums need an acyclic graph");

  GvlValues out;
  const PathMatrix b = path_matrix(lam);
  out.det = rows.empty() ? 1.0 : submatrix(b, cols, rows).transpose().determinant();

  const auto &target_list = cols.members();
  for (const auto &system : enumerate_path_systems(g, rows, cols)) {
    std::vector<int> perm;
    double monomial = 1.0;
    for (const auto &path : system) {
      for (std::size_t k = 1; k < path.size(); ++k)
        monomial *= lam.get(path[k - 1], path[k]);
      perm.push_back(static_cast<int>(
          std::lower_bound(target_list.begin(), target_list.end(), path.back()) -
          target_list.begin()));
    }
    out.path_sum += permutation_sign(perm) * monomial;
  }
  return out;
}

Eigen::MatrixXd a_matrix(const MixedGraph &g, const ParamMatrix &lam,
                         const ParamMatrix &lam_tilde) {
  require_same_binding(lam, lam_tilde);
  if (!is_acyclic(g))
    throw Error(ErrorCode::CyclicGraph, "A-matrix entries need an acyclic graph");
  const PathMatrix b = path_matrix(lam);
  const auto p = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (Vertex u = 0; u < p; ++u) {
    const VertexSet de = descendants(g, u);
    for (Vertex v : de) {
      double value = b(v, u);
      for (Vertex w : set_intersection(g.parents(v), de))
        value -= lam_tilde.get(w, v) * b(w, u);
      a(v, u) = value;
    }
  }
  return a;
}

Eigen::MatrixXd coefficient_block(const MixedGraph &g, const PathMatrix &b,
                                  Vertex v) {
  return submatrix(b, g.parents(v), removable_ancestors(g, v)).transpose();
}

Fiber fiber(const MixedGraph &g, const ParamMatrix &lam, Vertex v,
            const VertexSet &pinned) {
  const VertexSet &pa = g.parents(v);
  if (!pinned.is_subset_of(pa))
    throw Error(ErrorCode::NotAParentSubset, "pinned set must lie in pa(v)");
  if (!is_acyclic(g))
    throw Error(ErrorCode::CyclicGraph, "fiber oracle needs an acyclic graph");

  const Eigen::MatrixXd block = coefficient_block(g, path_matrix(lam), v);
  const auto m = static_cast<Eigen::Index>(pa.size());
  Eigen::MatrixXd system(block.rows() + static_cast<Eigen::Index>(pinned.size()), m);
  system.topRows(block.rows()) = block;
  Eigen::Index row = block.rows();
  for (Vertex k : pinned) {
    system.row(row).setZero();
    system(row++, std::lower_bound(pa.begin(), pa.end(), k) - pa.begin()) = 1.0;
  }

  Fiber out;
  const int rank = numeric_rank(system);
  out.dimension = static_cast<int>(m) - rank;
  std::vector<Vertex> fixed;
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::MatrixXd extended(system.rows() + 1, m);
    extended.topRows(system.rows()) = system;
    extended.row(system.rows()).setZero();
    extended(system.rows(), j) = 1.0;
    if (numeric_rank(extended) == rank)
      fixed.push_back(pa.members()[j]);
  }
  out.fixed = VertexSet(std::move(fixed));
  return out;
}

int fiber_dimension(const MixedGraph &g, const ParamMatrix &lam, Vertex v,
                    const VertexSet &pinned) {
  return fiber(g, lam, v, pinned).dimension;
}

ParamMatrix random_generic_params(const MixedGraph &g, std::uint64_t seed,
                                  std::uint64_t draw) {
  ParamMatrix lam(g);
  Stream s(seed, StreamTag::OracleDraw, {draw});
  for (const auto &[u, v] : g.directed_edges())
    lam.set(u, v, s.sign() * s.uniform(0.05, 1.0));
  return lam;
}

int modal_numeric_rank(const MixedGraph &g, const VertexSet &rows,
                       const VertexSet &cols, std::uint64_t seed, int draws) {
  std::map<int, int> counts;
  for (int d = 0; d < draws; ++d) {
    const PathMatrix b = path_matrix(random_generic_params(g, seed, d));
    ++counts[numeric_rank(submatrix(b, rows, cols))];
  }
  // Highest count wins; on ties the larger rank (the generic one).
  int best = 0, best_count = -1;
  for (const auto &[rank, count] : counts)
    if (count >= best_count) {
      best = rank;
      best_count = count;
    }
  return best;
}

Fiber generic_fiber(const MixedGraph &g, Vertex v, const VertexSet &pinned,
                    std::uint64_t seed, int draws) {
  std::vector<std::pair<Fiber, int>> seen;
  for (int d = 0; d < draws; ++d) {
    Fiber f = fiber(g, random_generic_params(g, seed, d), v, pinned);
    auto it = std::find_if(seen.begin(), seen.end(), [&](const auto &e) {
      return e.first.dimension == f.dimension && e.first.fixed == f.fixed;
    });
    if (it == seen.end())
      seen.emplace_back(std::move(f), 1);
    else
      ++it->second;
  }
  auto best = std::max_element(seen.begin(), seen.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second)
      return a.second < b.second;
    return a.first.dimension > b.first.dimension;
  });
  return best->first;
}

bool nongeneric_locus_check(const MixedGraph &g, const ParamMatrix &lam,
                            Vertex v) {
  const int rank = numeric_rank(coefficient_block(g, path_matrix(lam), v));
  return rank < v_rank(g, v, g.parents(v));
}

std::size_t admissible_permutations(const MixedGraph &g) {
  if (g.size() > 9)
    throw Error(ErrorCode::TooLarge, "permutation oracle limited to 9 vertices");
  if (!g.bidirected_edges().empty())
    throw Error(ErrorCode::NotCycleDecomposable,
                "permutation oracle needs an empty bidirected part");
  const auto p = static_cast<Vertex>(g.size());
  std::vector<VertexSet> closed(p);
  for (Vertex v = 0; v < p; ++v) {
    closed[v] = g.parents(v);
    closed[v].insert(v);
  }
  std::vector<bool> taken(p, false);
  std::size_t count = 0;
  std::function<void(Vertex)> assign = [&](Vertex v) {
    if (v == p) {
      ++count;
      return;
    }
    for (Vertex w = 0; w < p; ++w) {
      if (taken[w] || !closed[w].contains(v) || !closed[w].is_subset_of(closed[v]))
        continue;
      taken[w] = true;
      assign(v + 1);
      taken[w] = false;
    }
  };
  assign(0);
  return count;
}

RankCrossCheck cross_check_ranks(const MixedGraph &g, std::uint64_t seed,
                                 const NetworkOptions &opts, int draws) {
  std::vector<PathMatrix> bs;
  for (int d = 0; d < draws; ++d)
    bs.push_back(path_matrix(random_generic_params(g, seed, static_cast<std::uint64_t>(d))));

  RankCrossCheck out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = static_cast<Vertex>(i);
    const VertexSet removable = removable_ancestors(g, v);
    VertexSet inner = ancestors(g, v);
    inner.erase(v);
    const auto &pa = g.parents(v).members();
    for (std::size_t k = 0; k <= pa.size(); ++k) {
      const bool bad = any_subset(pa, k, [&](const VertexSet &q) {
        ++out.checks;
        const auto net = build_flow_network(g, v, q, opts);
        const auto flow = max_flow(net.network);
        const std::size_t brute = max_path_system_size(g, removable, q, &inner);

        std::map<int, int> counts;
        for (const auto &b : bs)
          ++counts[numeric_rank(submatrix(b, q, removable))];
        int numeric = 0, best = -1;
        for (const auto &[rank, count] : counts)
          if (count >= best) {
            numeric = rank;
            best = count;
          }

        if (flow.value == static_cast<Capacity>(brute) && brute == static_cast<std::size_t>(numeric))
          return false;
        out.mismatch = RankMismatch{v, q, flow.value, brute, numeric, flow_witness(net, flow)};
        return true;
      });
      if (bad)
        return out;
    }
  }
  return out;
}

void for_each_admg(int p, const std::function<void(const MixedGraph &)> &f) {
  std::vector<std::string> names;
  for (int i = 1; i <= p; ++i)
    names.push_back("v" + std::to_string(i));
  std::vector<NamedEdge> ordered, unordered;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j) {
        ordered.emplace_back(names[i], names[j]);
        if (i < j)
          unordered.emplace_back(names[i], names[j]);
      }
  if (ordered.size() > 20)
    throw Error(ErrorCode::TooLarge, "exhaustive ADMG enumeration limited to 5 vertices");

  auto subset = [](const std::vector<NamedEdge> &all, std::uint64_t mask) {
    std::vector<NamedEdge> out;
    for (std::size_t k = 0; k < all.size(); ++k)
      if (mask >> k & 1)
        out.push_back(all[k]);
    return out;
  };
  for (std::uint64_t dm = 0; dm < (std::uint64_t{1} << ordered.size()); ++dm) {
    const auto directed = subset(ordered, dm);
    if (!is_acyclic(MixedGraph(names, directed, {})))
      continue;
    for (std::uint64_t bm = 0; bm < (std::uint64_t{1} << unordered.size()); ++bm)
      f(MixedGraph(names, directed, subset(unordered, bm)));
  }
}

MixedGraph sampled_admg(int p, std::uint64_t seed, std::uint64_t index) {
  Stream s(seed, StreamTag::GraphCounts, {index, 0x5eedULL});
  const double density = s.uniform(0.1, 1.0);
  return random_admg(p, density, derive_seed(seed, {index}));
}

}  // namespace admgid
