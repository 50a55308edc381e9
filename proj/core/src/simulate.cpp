// SPDX-License-Identifier: Apache-2.0

#include "admgid/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "admgid/error.hpp"
#include "admgid/oracle.hpp"
#include "admgid/random.hpp"

namespace admgid {

Dataset::Dataset(std::vector<std::string> columns, Eigen::MatrixXd values,
                 Provenance provenance)
    : columns_(std::move(columns)), values_(std::move(values)),
      provenance_(std::move(provenance)) {
  if (static_cast<Eigen::Index>(columns_.size()) != values_.cols())
    throw Error(ErrorCode::SizeMismatch,
                std::to_string(columns_.size()) + " column names for " +
                    std::to_string(values_.cols()) + " columns");
  if (values_.rows() < 1)
    throw Error(ErrorCode::SizeMismatch, "dataset needs at least one row");
  if (!values_.allFinite())
    throw Error(ErrorCode::NonFiniteData, "dataset contains NaN or Inf");
}

void Dataset::require_bound_to(const MixedGraph &g) const {
  if (columns_ != g.vertices())
    throw Error(ErrorCode::BindingMismatch,
                "data columns do not match the graph's vertices");
}

MixedGraph random_admg(int p, double density, std::uint64_t seed) {
  if (p < 2)
    throw Error(ErrorCode::SizeMismatch, "random_admg needs p >= 2");
  if (!(density > 0.0 && density <= 1.0))
    throw Error(ErrorCode::InvalidDensity, "density must lie in (0, 1]");
  // The epsilon keeps e.g. 0.7·p(p−1) from flooring one below its value.
  const auto pairs = static_cast<std::uint64_t>(p) * (p - 1) / 2;
  const auto e = static_cast<std::uint64_t>(
      std::floor(density * p * (p - 1) + 1e-9));
  if (e < 1)
    throw Error(ErrorCode::InvalidDensity,
                "density " + std::to_string(density) + " gives no edges");

  // e_d ~ U{1..e}, restricted to counts both edge kinds can realize
  // (at most p(p−1)/2 each).
  Stream counts(seed, StreamTag::GraphCounts);
  const std::uint64_t lo = std::max<std::uint64_t>(1, e > pairs ? e - pairs : 0);
  const std::uint64_t hi = std::min(e, pairs);
  const std::uint64_t e_d = lo + counts.below(hi - lo + 1);

  Stream order_stream(seed, StreamTag::GraphOrder);
  const std::vector<int> order = random_permutation(order_stream, p);

  std::vector<std::pair<int, int>> slots;
  slots.reserve(pairs);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      slots.emplace_back(i, j);

  std::vector<std::string> names;
  for (int i = 1; i <= p; ++i)
    names.push_back("v" + std::to_string(i));

  std::vector<NamedEdge> directed, bidirected;
  Stream dpick(seed, StreamTag::DirectedPick);
  for (auto k : sample_without_replacement(dpick, pairs, e_d)) {
    const auto [i, j] = slots[k];
    directed.emplace_back(names[order[i]], names[order[j]]);
  }
  Stream bpick(seed, StreamTag::BidirectedPick);
  for (auto k : sample_without_replacement(bpick, pairs, e - e_d)) {
    const auto [i, j] = slots[k];
    bidirected.emplace_back(names[i], names[j]);
  }
  return MixedGraph(std::move(names), std::move(directed), std::move(bidirected));
}

ParamMatrix sample_parameters(const MixedGraph &g, std::uint64_t seed,
                              double bound) {
  constexpr int kMaxRedraws = 100;
  ParamMatrix lam(g);
  const bool acyclic = is_acyclic(g);
  for (std::uint64_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
    for (const auto &[u, v] : g.directed_edges()) {
      Stream s(seed, StreamTag::Parameters,
               {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v), attempt});
      lam.set(u, v, s.uniform(-bound, bound));
    }
    if (acyclic)
      return lam;
    try {
      path_matrix(lam);
      return lam;
    } catch (const Error &err) {
      if (err.code() != ErrorCode::SingularMatrix)
        throw;
    }
  }
  throw Error(ErrorCode::DegenerateParameters,
              "det(I - Lambda) ~ 0 after " + std::to_string(kMaxRedraws) + " draws");
}

namespace {

void validate(const ErrorModel &model) {
  if (!(model.scale_min > 0.0 && model.scale_max >= model.scale_min &&
        std::isfinite(model.scale_max)))
    throw Error(ErrorCode::InvalidErrorModel, "scale range must lie in (0, inf)");
  if (!(model.weight_bound >= 0.0 && std::isfinite(model.weight_bound)))
    throw Error(ErrorCode::InvalidErrorModel, "weight bound must be finite and >= 0");
}

// Fills `out` with n zero-mean draws of standard deviation sd.
void fill_noise(Stream &s, ErrorKind kind, double sd, Eigen::Ref<Eigen::VectorXd> out) {
  if (kind == ErrorKind::SharedLatentUniform) {
    const double half = sd * std::sqrt(3.0);
    for (Eigen::Index i = 0; i < out.size(); ++i)
      out[i] = s.uniform(-half, half);
  } else {
    const double b = sd / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < out.size(); ++i)
      out[i] = s.laplace(b);
  }
}

std::uint64_t u64(int x) { return static_cast<std::uint64_t>(x); }

const char *kind_name(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::SharedLatentLaplace: return "shared-latent-laplace";
  case ErrorKind::SharedLatentUniform: return "shared-latent-uniform";
  case ErrorKind::FactorModel: return "factor-model";
  }
  return "unknown";
}

}  // namespace

Dataset sample_errors(const MixedGraph &g, const ErrorModel &model,
                      Eigen::Index n, std::uint64_t seed) {
  validate(model);
  if (n < 1)
    throw Error(ErrorCode::SizeMismatch, "n must be at least 1");
  if (model.kind == ErrorKind::FactorModel) {
    if (!model.factors)
      throw Error(ErrorCode::InvalidFactorGraph, "factor model without a factor graph");
    if (model.factors->observed() != g.vertices())
      throw Error(ErrorCode::BindingMismatch, "factor graph observed set differs from graph");
    return sample_factor_errors(*model.factors, n, seed);
  }

  const auto p = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd eps(n, p);
  Eigen::VectorXd buf(n);
  for (Vertex v = 0; v < p; ++v) {
    Stream scale(seed, StreamTag::VertexScale, {u64(v)});
    Stream noise(seed, StreamTag::VertexNoise, {u64(v)});
    fill_noise(noise, model.kind, scale.uniform(model.scale_min, model.scale_max), eps.col(v));
  }
  for (const auto &[u, v] : g.bidirected_edges()) {
    for (std::uint64_t k = 1; k <= 2; ++k) {
      Stream scale(seed, StreamTag::EdgeScale, {u64(u), u64(v), k});
      Stream noise(seed, StreamTag::EdgeNoise, {u64(u), u64(v), k});
      Stream weight(seed, StreamTag::EdgeWeight, {u64(u), u64(v), k});
      fill_noise(noise, model.kind, scale.uniform(model.scale_min, model.scale_max), buf);
      const double wu = weight.uniform(-model.weight_bound, model.weight_bound);
      const double wv = weight.uniform(-model.weight_bound, model.weight_bound);
      eps.col(u) += wu * buf;
      eps.col(v) += wv * buf;
    }
  }
  Provenance prov{seed, "sample_errors",
                  {{"kind", kind_name(model.kind)},
                   {"n", n},
                   {"scale_range", {model.scale_min, model.scale_max}},
                   {"weight_bound", model.weight_bound}}};
  return Dataset(g.vertices(), std::move(eps), std::move(prov));
}

Dataset sample_factor_errors(const LatentFactorGraph &l, Eigen::Index n,
                             std::uint64_t seed, ErrorKind noise_kind) {
  if (n < 1)
    throw Error(ErrorCode::SizeMismatch, "n must be at least 1");
  if (noise_kind == ErrorKind::FactorModel)
    noise_kind = ErrorKind::SharedLatentLaplace;
  const ErrorModel defaults;
  const auto p = static_cast<Eigen::Index>(l.observed().size());
  Eigen::MatrixXd eps(n, p);
  for (Eigen::Index v = 0; v < p; ++v) {
    Stream scale(seed, StreamTag::VertexScale, {static_cast<std::uint64_t>(v)});
    Stream noise(seed, StreamTag::VertexNoise, {static_cast<std::uint64_t>(v)});
    fill_noise(noise, noise_kind, scale.uniform(defaults.scale_min, defaults.scale_max),
               eps.col(v));
  }
  std::vector<Eigen::VectorXd> latent(l.latents().size());
  for (std::size_t k = 0; k < latent.size(); ++k) {
    latent[k].resize(n);
    Stream scale(seed, StreamTag::EdgeScale, {k});
    Stream noise(seed, StreamTag::LatentNoise, {k});
    fill_noise(noise, noise_kind, scale.uniform(defaults.scale_min, defaults.scale_max),
               latent[k]);
  }
  const auto &loadings = l.loadings();
  for (std::size_t k = 0; k < loadings.size(); ++k) {
    double w;
    if (l.weights()) {
      w = (*l.weights())[k];
    } else {
      Stream weight(seed, StreamTag::LoadingWeight, {k});
      w = weight.uniform(-defaults.weight_bound, defaults.weight_bound);
    }
    eps.col(loadings[k].observed) += w * latent[loadings[k].latent];
  }
  Provenance prov{seed, "sample_factor_errors",
                  {{"kind", kind_name(noise_kind)},
                   {"n", n},
                   {"latents", l.latents()},
                   {"weights_given", l.weights().has_value()}}};
  return Dataset(l.observed(), std::move(eps), std::move(prov));
}

Dataset generate_data(const MixedGraph &g, const ParamMatrix &lam,
                      const Dataset &errors) {
  errors.require_bound_to(g);
  if (lam.binding().vertices != g.vertices() || lam.edges() != g.directed_edges())
    throw Error(ErrorCode::BindingMismatch, "parameters bound to a different graph");
  const PathMatrix b = path_matrix(lam);
  Provenance prov = errors.provenance();
  prov.generator = "generate_data";
  return Dataset(g.vertices(), errors.values() * b.transpose(), std::move(prov));
}

double empirical_cumulant(const Dataset &ds, const std::vector<int> &indices) {
  return empirical_cumulant(ds.values(), indices);
}

double empirical_cumulant(const Eigen::MatrixXd &values,
                          const std::vector<int> &indices) {
  const std::size_t k = indices.size();
  if (k < 2 || k > 4)
    throw Error(ErrorCode::UnsupportedOrder,
                "cumulant order " + std::to_string(k) + " not in {2,3,4}");
  const double n = static_cast<double>(values.rows());
  if (values.rows() < static_cast<Eigen::Index>(k))
    throw Error(ErrorCode::SizeMismatch,
                "order-" + std::to_string(k) + " k-statistic needs n >= " + std::to_string(k));
  for (int i : indices)
    if (i < 0 || i >= values.cols())
      throw Error(ErrorCode::UnknownVertex, "column " + std::to_string(i));

  std::vector<Eigen::VectorXd> d;
  for (int i : indices)
    d.push_back(values.col(i).array() - values.col(i).mean());
  auto m = [&](std::initializer_list<int> which) {
    Eigen::ArrayXd prod = Eigen::ArrayXd::Ones(values.rows());
    for (int w : which)
      prod *= d[w].array();
    return prod.sum() / n;
  };

  switch (k) {
  case 2:
    return m({0, 1}) * n / (n - 1);
  case 3:
    return m({0, 1, 2}) * n * n / ((n - 1) * (n - 2));
  default: {
    const double pairs = m({0, 1}) * m({2, 3}) + m({0, 2}) * m({1, 3}) +
                         m({0, 3}) * m({1, 2});
    return n * n * ((n + 1) * m({0, 1, 2, 3}) - (n - 1) * pairs) /
           ((n - 1) * (n - 2) * (n - 3));
  }
  }
}

}  // namespace admgid
