// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "admgid/graph.hpp"

namespace admgid {

/// Vertex names and directed support a ParamMatrix is tied to.
struct Binding {
  std::vector<std::string> vertices;
  std::vector<Edge> directed;

  friend bool operator==(const Binding &, const Binding &) = default;
};

/// Λ supported on the directed edges of a graph; zero elsewhere.
class ParamMatrix {
public:
  ParamMatrix() = default;
  explicit ParamMatrix(const MixedGraph &g);

  std::size_t size() const noexcept { return lam_.rows(); }
  const Binding &binding() const noexcept { return *binding_; }
  const std::vector<Edge> &edges() const noexcept { return binding_->directed; }
  bool same_binding(const ParamMatrix &other) const;

  double get(Vertex u, Vertex v) const;
  /// Throws Error{BindingMismatch} when u->v is not a directed edge.
  void set(Vertex u, Vertex v, double value);

  /// Dense p×p matrix with λ_uv at (u, v).
  const Eigen::MatrixXd &matrix() const noexcept { return lam_; }

  /// Free coordinates, ordered like edges().
  Eigen::VectorXd to_vector() const;
  void assign(const Eigen::VectorXd &values);

private:
  std::shared_ptr<const Binding> binding_ = std::make_shared<Binding>();
  Eigen::MatrixXd lam_;
};

/// B_Λ = (I−Λ)^{-T}; (u, v) sums path monomials over directed paths v -> u.
using PathMatrix = Eigen::MatrixXd;

/// Throws Error{BindingMismatch} unless both matrices share a binding.
void require_same_binding(const ParamMatrix &a, const ParamMatrix &b);

}  // namespace admgid
