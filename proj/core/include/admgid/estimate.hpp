// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "admgid/error.hpp"
#include "admgid/graph.hpp"
#include "admgid/kernels.hpp"
#include "admgid/lbfgs.hpp"
#include "admgid/params.hpp"
#include "admgid/simulate.hpp"

namespace admgid {

/// Column v is X_v − Σ_{u∈pa(v)} λ̃_uv X_u (ε = (I−Λ)ᵀ X convention).
/// Throws Error{BindingMismatch}.
Dataset residuals(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds);

/// Unordered pairs {u, v}, u < v, with no bidirected edge between them.
std::vector<Edge> objective_pairs(const MixedGraph &g);

/// One kernel per vertex; median-heuristic bandwidths fixed on the
/// residuals at lam_tilde.
std::vector<KernelSpec> freeze_kernels(const MixedGraph &g, const ParamMatrix &lam_tilde,
                                       const Dataset &ds, const KernelSpec &kernel);

/// Σ over objective_pairs of HSIC_n between residual columns.
double objective(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds,
                 const std::vector<KernelSpec> &kernels);
/// Convenience form: kernels frozen at lam_tilde itself.
double objective(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds,
                 const KernelSpec &kernel);

/// ∂ objective / ∂λ̃_uv on every directed edge (zero elsewhere).
ParamMatrix gradient(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds,
                     const std::vector<KernelSpec> &kernels);

/// Objective value and gradient in the free-coordinate order of
/// ParamMatrix::to_vector().
double objective_and_gradient(const MixedGraph &g, const ParamMatrix &lam_tilde,
                              const Dataset &ds, const std::vector<KernelSpec> &kernels,
                              Eigen::VectorXd *grad);

/// Per-vertex OLS of centered X_v on centered X_{pa(v)}.
/// Throws Error{RankDeficientParents}.
ParamMatrix regression_init(const MixedGraph &g, const Dataset &ds);

/// Entries uniform on [−bound, bound].
ParamMatrix random_init(const MixedGraph &g, std::uint64_t seed, double bound = 5.0);

enum class InitKind { Regression, TrueValue, Random, Custom };
std::string to_string(InitKind kind);

struct FitOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
  double box = 50.0;
  int memory = 10;
  double stall_tolerance = 1e-10;
};

struct EstimateResult {
  ParamMatrix lam_hat;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  InitKind init_kind = InitKind::Custom;
  std::string stop_reason;
  /// Kernels as used (bandwidths frozen at the start).
  std::vector<KernelSpec> kernels;

  double final_objective() const { return objective_trace.back(); }
};

/// Raised when the objective turns NaN/Inf; carries the last finite iterate.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string &what, EstimateResult last)
      : Error(ErrorCode::NonFiniteObjective, what), last_(std::move(last)) {}
  const EstimateResult &last() const noexcept { return last_; }

private:
  EstimateResult last_;
};

/// Minimizes the sample objective from `init` with projected L-BFGS.
/// Throws DivergenceError.
EstimateResult fit(const MixedGraph &g, const Dataset &ds, const KernelSpec &kernel,
                   const ParamMatrix &init, const FitOptions &opts = {},
                   InitKind kind = InitKind::Custom);

/// Runs fit from each start and keeps the lowest final objective (first
/// wins ties).
EstimateResult fit_multistart(const MixedGraph &g, const Dataset &ds, const KernelSpec &kernel,
                              const std::vector<std::pair<ParamMatrix, InitKind>> &starts,
                              const FitOptions &opts = {});

/// ||Λ̂ − Λ||_F / ||Λ||_F. Throws Error{ZeroTrueMatrix | BindingMismatch}.
double normalized_frobenius_loss(const ParamMatrix &lam_hat, const ParamMatrix &lam_true);

}  // namespace admgid
