// SPDX-License-Identifier: Apache-2.0

#include "admgid/params.hpp"

#include <algorithm>

#include "admgid/error.hpp"

namespace admgid {

ParamMatrix::ParamMatrix(const MixedGraph &g)
    : binding_(std::make_shared<Binding>(Binding{g.vertices(), g.directed_edges()})),
      lam_(Eigen::MatrixXd::Zero(g.size(), g.size())) {}

bool ParamMatrix::same_binding(const ParamMatrix &other) const {
  return binding_ == other.binding_ || *binding_ == *other.binding_;
}

double ParamMatrix::get(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= lam_.rows() || v >= lam_.cols())
    throw Error(ErrorCode::UnknownVertex, "index out of range");
  return lam_(u, v);
}

void ParamMatrix::set(Vertex u, Vertex v, double value) {
  const auto &e = binding_->directed;
  // directed edges are kept sorted by MixedGraph
  if (!std::binary_search(e.begin(), e.end(), Edge{u, v}))
    throw Error(ErrorCode::BindingMismatch,
                "no directed edge " + std::to_string(u) + "->" + std::to_string(v));
  lam_(u, v) = value;
}

Eigen::VectorXd ParamMatrix::to_vector() const {
  const auto &e = binding_->directed;
  Eigen::VectorXd out(e.size());
  for (std::size_t k = 0; k < e.size(); ++k)
    out[k] = lam_(e[k].first, e[k].second);
  return out;
}

void ParamMatrix::assign(const Eigen::VectorXd &values) {
  const auto &e = binding_->directed;
  if (static_cast<std::size_t>(values.size()) != e.size())
    throw Error(ErrorCode::SizeMismatch, "expected " + std::to_string(e.size()) +
                                             " coordinates, got " +
                                             std::to_string(values.size()));
  for (std::size_t k = 0; k < e.size(); ++k)
    lam_(e[k].first, e[k].second) = values[k];
}

void require_same_binding(const ParamMatrix &a, const ParamMatrix &b) {
  if (!a.same_binding(b))
    throw Error(ErrorCode::BindingMismatch, "parameter matrices bound to different graphs");
}

}  // namespace admgid
