// SPDX-License-Identifier: Apache-2.0

#include "admgid/estimate.hpp"

#include <cmath>
#include <optional>

#include "admgid/oracle.hpp"
#include "admgid/random.hpp"

namespace admgid {

namespace {

void require_binding(const MixedGraph &g, const ParamMatrix &lam, const Dataset &ds) {
  ds.require_bound_to(g);
  if (lam.binding().vertices != g.vertices() || lam.edges() != g.directed_edges())
    throw Error(ErrorCode::BindingMismatch, "parameters bound to a different graph");
}

Eigen::MatrixXd residual_matrix(const ParamMatrix &lam, const Eigen::MatrixXd &x) {
  return x - x * lam.matrix();
}

}  // namespace

Dataset residuals(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds) {
  require_binding(g, lam_tilde, ds);
  Provenance prov = ds.provenance();
  prov.generator = "residuals";
  return Dataset(g.vertices(), residual_matrix(lam_tilde, ds.values()), std::move(prov));
}

std::vector<Edge> objective_pairs(const MixedGraph &g) {
  std::vector<Edge> out;
  const auto p = static_cast<Vertex>(g.size());
  for (Vertex u = 0; u < p; ++u)
    for (Vertex v = u + 1; v < p; ++v)
      if (!g.has_bidirected(u, v))
        out.emplace_back(u, v);
  return out;
}

std::vector<KernelSpec> freeze_kernels(const MixedGraph &g, const ParamMatrix &lam_tilde,
                                       const Dataset &ds, const KernelSpec &kernel) {
  require_binding(g, lam_tilde, ds);
  kernel.validate();
  std::vector<KernelSpec> out(g.size(), kernel);
  if (kernel.resolved())
    return out;
  const Eigen::MatrixXd r = residual_matrix(lam_tilde, ds.values());
  for (std::size_t v = 0; v < g.size(); ++v)
    out[v] = resolve(kernel, r.col(static_cast<Eigen::Index>(v)));
  return out;
}

double objective_and_gradient(const MixedGraph &g, const ParamMatrix &lam_tilde,
                              const Dataset &ds, const std::vector<KernelSpec> &kernels,
                              Eigen::VectorXd *grad) {
  require_binding(g, lam_tilde, ds);
  if (kernels.size() != g.size())
    throw Error(ErrorCode::SizeMismatch, "need one kernel per vertex");
  if (ds.n() < 2)
    throw Error(ErrorCode::LengthMismatch, "HSIC needs n >= 2");

  const auto pairs = objective_pairs(g);
  const Eigen::MatrixXd r = residual_matrix(lam_tilde, ds.values());
  std::vector<std::optional<HsicColumn>> cols(g.size());
  for (const auto &[u, v] : pairs)
    for (Vertex w : {u, v})
      if (!cols[w])
        cols[w].emplace(r.col(w), kernels[w]);

  double value = 0.0;
  Eigen::MatrixXd dr;  // ∂ objective / ∂ residual entries
  if (grad)
    dr = Eigen::MatrixXd::Zero(r.rows(), r.cols());
  Eigen::VectorXd gu, gv;
  for (const auto &[u, v] : pairs) {
    value += hsic_pair(*cols[u], *cols[v], grad ? &gu : nullptr, grad ? &gv : nullptr);
    if (grad) {
      dr.col(u) += gu;
      dr.col(v) += gv;
    }
  }
  if (grad) {
    // r_v = x_v − Σ λ̃_wv x_w, so ∂/∂λ̃_uv = −x_uᵀ ∂/∂r_v.
    const auto &edges = lam_tilde.edges();
    grad->resize(static_cast<Eigen::Index>(edges.size()));
    for (std::size_t k = 0; k < edges.size(); ++k)
      (*grad)[static_cast<Eigen::Index>(k)] =
          -ds.values().col(edges[k].first).dot(dr.col(edges[k].second));
  }
  return value;
}

double objective(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds,
                 const std::vector<KernelSpec> &kernels) {
  return objective_and_gradient(g, lam_tilde, ds, kernels, nullptr);
}

double objective(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds,
                 const KernelSpec &kernel) {
  return objective(g, lam_tilde, ds, freeze_kernels(g, lam_tilde, ds, kernel));
}

ParamMatrix gradient(const MixedGraph &g, const ParamMatrix &lam_tilde, const Dataset &ds,
                     const std::vector<KernelSpec> &kernels) {
  Eigen::VectorXd grad;
  objective_and_gradient(g, lam_tilde, ds, kernels, &grad);
  ParamMatrix out(g);
  out.assign(grad);
  return out;
}

ParamMatrix regression_init(const MixedGraph &g, const Dataset &ds) {
  ds.require_bound_to(g);
  const Eigen::MatrixXd xc = ds.values().rowwise() - ds.values().colwise().mean();
  ParamMatrix lam(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = static_cast<Vertex>(i);
    const auto &pa = g.parents(v);
    if (pa.empty())
      continue;
    if (ds.n() <= static_cast<Eigen::Index>(pa.size()))
      throw Error(ErrorCode::RankDeficientParents,
                  "n = " + std::to_string(ds.n()) + " too small for the parents of " + g.name(v));
    Eigen::MatrixXd z(xc.rows(), static_cast<Eigen::Index>(pa.size()));
    Eigen::Index j = 0;
    for (Vertex u : pa)
      z.col(j++) = xc.col(u);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < z.cols())
      throw Error(ErrorCode::RankDeficientParents,
                  "parent columns of " + g.name(v) + " are linearly dependent");
    const Eigen::VectorXd beta = qr.solve(xc.col(v));
    j = 0;
    for (Vertex u : pa)
      lam.set(u, v, beta[j++]);
  }
  return lam;
}

ParamMatrix random_init(const MixedGraph &g, std::uint64_t seed, double bound) {
  ParamMatrix lam(g);
  for (const auto &[u, v] : g.directed_edges()) {
    Stream s(seed, StreamTag::InitDraw,
             {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v)});
    lam.set(u, v, s.uniform(-bound, bound));
  }
  return lam;
}

std::string to_string(InitKind kind) {
  switch (kind) {
  case InitKind::Regression: return "regression";
  case InitKind::TrueValue: return "true-value";
  case InitKind::Random: return "random";
  case InitKind::Custom: return "custom";
  }
  return "custom";
}

EstimateResult fit(const MixedGraph &g, const Dataset &ds, const KernelSpec &kernel,
                   const ParamMatrix &init, const FitOptions &opts, InitKind kind) {
  EstimateResult out;
  out.init_kind = kind;
  out.kernels = freeze_kernels(g, init, ds, kernel);

  ParamMatrix work = init;
  const ObjectiveFn fn = [&](const Eigen::VectorXd &x, Eigen::VectorXd &grad) {
    work.assign(x);
    return objective_and_gradient(g, work, ds, out.kernels, &grad);
  };

  LbfgsOptions lo;
  lo.memory = opts.memory;
  lo.max_iterations = opts.max_iterations;
  lo.gradient_tolerance = opts.gradient_tolerance;
  lo.stall_tolerance = opts.stall_tolerance;
  lo.bound = opts.box;
  const LbfgsResult res = minimize_lbfgs(fn, init.to_vector(), lo);

  out.lam_hat = init;
  out.lam_hat.assign(res.x);
  out.objective_trace = res.trace;
  out.iterations = res.iterations;
  out.converged = res.converged;
  out.stop_reason = res.reason;
  if (res.diverged)
    throw DivergenceError(res.reason, std::move(out));
  return out;
}

EstimateResult fit_multistart(const MixedGraph &g, const Dataset &ds, const KernelSpec &kernel,
                              const std::vector<std::pair<ParamMatrix, InitKind>> &starts,
                              const FitOptions &opts) {
  if (starts.empty())
    throw Error(ErrorCode::SizeMismatch, "multistart needs at least one start");
  std::optional<EstimateResult> best;
  for (const auto &[init, kind] : starts) {
    EstimateResult r = fit(g, ds, kernel, init, opts, kind);
    if (!best || r.final_objective() < best->final_objective())
      best = std::move(r);
  }
  return std::move(*best);
}

double normalized_frobenius_loss(const ParamMatrix &lam_hat, const ParamMatrix &lam_true) {
  require_same_binding(lam_hat, lam_true);
  const double denom = lam_true.matrix().norm();
  if (denom == 0.0)
    throw Error(ErrorCode::ZeroTrueMatrix, "true coefficient matrix is zero");
  return (lam_hat.matrix() - lam_true.matrix()).norm() / denom;
}

}  // namespace admgid
