// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "admgid/graph.hpp"
#include "admgid/params.hpp"

namespace admgid {

struct Provenance {
  std::uint64_t seed = 0;
  std::string generator;
  nlohmann::json params = nlohmann::json::object();
};

/// n×p sample matrix (row = sample) bound to vertex names.
class Dataset {
public:
  Dataset() = default;
  /// Throws Error{SizeMismatch} on shape problems (including n = 0) and
  /// Error{NonFiniteData} on NaN/Inf entries.
  Dataset(std::vector<std::string> columns, Eigen::MatrixXd values,
          Provenance provenance = {});

  const std::vector<std::string> &columns() const noexcept { return columns_; }
  const Eigen::MatrixXd &values() const noexcept { return values_; }
  const Provenance &provenance() const noexcept { return provenance_; }
  Eigen::Index n() const noexcept { return values_.rows(); }
  Eigen::Index p() const noexcept { return values_.cols(); }

  /// Throws Error{BindingMismatch} unless the columns are g's vertices in
  /// order.
  void require_bound_to(const MixedGraph &g) const;

private:
  std::vector<std::string> columns_;
  Eigen::MatrixXd values_;
  Provenance provenance_;
};

enum class ErrorKind { SharedLatentLaplace, SharedLatentUniform, FactorModel };

struct ErrorModel {
  ErrorKind kind = ErrorKind::SharedLatentLaplace;
  /// Standard deviations are drawn from U(scale_min, scale_max).
  double scale_min = 0.2;
  double scale_max = 3.0;
  /// Mixing weights are drawn from U(-weight_bound, weight_bound).
  double weight_bound = 5.0;
  /// Required for FactorModel.
  std::optional<LatentFactorGraph> factors;
};

/// e = ⌊d·p(p−1)⌋ total edges, e_d directed edges on a uniformly random
/// causal order, e − e_d bidirected edges. Vertices are named v1..vp.
/// Throws Error{InvalidDensity} for d outside (0,1] or e < 1,
/// Error{SizeMismatch} for p < 2.
MixedGraph random_admg(int p, double density, std::uint64_t seed);

/// λ_uv ~ U(−5,5) on every directed edge; cyclic graphs are redrawn until
/// |det(I−Λ)| ≥ 1e−8. Throws Error{DegenerateParameters} after 100 tries.
ParamMatrix sample_parameters(const MixedGraph &g, std::uint64_t seed,
                              double bound = 5.0);

/// ε_v = η_v + Σ_{u↔v} (w¹ η¹_uv + w² η²_uv) with all η independent,
/// zero-mean Laplace (or uniform) with standard deviation ~ U(0.2, 3).
/// Rows are drawn sequentially per stream, so a larger n extends a
/// smaller one. FactorModel dispatches to sample_factor_errors.
Dataset sample_errors(const MixedGraph &g, const ErrorModel &model,
                      Eigen::Index n, std::uint64_t seed);

/// ε = Hᵀ η_L + η_V for a pure factor graph; loading weights come from
/// the graph or are drawn from U(−5,5).
Dataset sample_factor_errors(const LatentFactorGraph &l, Eigen::Index n,
                             std::uint64_t seed,
                             ErrorKind noise = ErrorKind::SharedLatentLaplace);

/// X = B_Λ ε row by row. Throws Error{SingularMatrix | BindingMismatch}.
Dataset generate_data(const MixedGraph &g, const ParamMatrix &lam,
                      const Dataset &errors);

/// k-statistic estimate of the joint cumulant of the listed columns
/// (order 2, 3 or 4; repeats allowed).
/// Throws Error{UnsupportedOrder | SizeMismatch}.
double empirical_cumulant(const Dataset &ds, const std::vector<int> &indices);
double empirical_cumulant(const Eigen::MatrixXd &values,
                          const std::vector<int> &indices);

}  // namespace admgid
