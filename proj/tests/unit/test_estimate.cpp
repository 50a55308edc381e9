// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "admgid/error.hpp"
#include "admgid/estimate.hpp"
#include "admgid/kernels.hpp"
#include "admgid/random.hpp"
#include "admgid/simulate.hpp"
#include "test_support.hpp"

using namespace admgid;
using admgid::testing::load_graph;
using admgid::testing::params;

namespace {

struct Sample {
  ParamMatrix lam;
  Dataset errors;
  Dataset data;
};

Sample simulate(const MixedGraph &g, Eigen::Index n, std::uint64_t seed) {
  ParamMatrix lam = sample_parameters(g, seed);
  Dataset eps = sample_errors(g, ErrorModel{}, n, seed);
  Dataset x = generate_data(g, lam, eps);
  return {std::move(lam), std::move(eps), std::move(x)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

TEST(Residuals, Identities) {
  const MixedGraph g = load_graph("diamond");
  const Sample s = simulate(g, 200, 1);
  const Eigen::MatrixXd r = residuals(g, s.lam, s.data).values();
  EXPECT_LT((r - s.errors.values()).cwiseAbs().maxCoeff(),
            1e-10 * (1 + s.data.values().cwiseAbs().maxCoeff()));
  EXPECT_EQ(residuals(g, ParamMatrix(g), s.data).values(), s.data.values());
}

TEST(Residuals, LinearInLambda) {
  const MixedGraph g = load_graph("iv");
  const Sample s = simulate(g, 100, 2);
  ParamMatrix moved = s.lam;
  const double delta = 0.37;
  moved.set(1, 2, s.lam.get(1, 2) + delta);
  const Eigen::MatrixXd a = residuals(g, s.lam, s.data).values();
  const Eigen::MatrixXd b = residuals(g, moved, s.data).values();
  const Eigen::VectorXd want = a.col(2) - delta * s.data.values().col(1);
  EXPECT_LT((b.col(2) - want).cwiseAbs().maxCoeff(), 1e-12 * (1 + want.cwiseAbs().maxCoeff()));
  EXPECT_EQ(a.col(0), b.col(0));
  EXPECT_EQ(a.col(1), b.col(1));
}

TEST(Objective, PairsOfIv) {
  const MixedGraph g = load_graph("iv");
  EXPECT_EQ(objective_pairs(g), (std::vector<Edge>{{0, 1}, {0, 2}}));
}

TEST(Objective, CompleteBidirectedIsZero) {
  const MixedGraph g({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}},
                     {{"a", "b"}, {"a", "c"}, {"b", "c"}});
  EXPECT_TRUE(objective_pairs(g).empty());
  const Sample s = simulate(g, 100, 3);
  const auto kernels = freeze_kernels(g, s.lam, s.data, KernelSpec::polynomial());
  EXPECT_EQ(objective(g, s.lam, s.data, kernels), 0.0);
  EXPECT_TRUE(gradient(g, s.lam, s.data, kernels).matrix().isZero(0.0));
}

TEST(Objective, SumOfPairwiseHsic) {
  const MixedGraph g = load_graph("iv");
  const Sample s = simulate(g, 150, 4);
  const KernelSpec k = KernelSpec::polynomial();
  const Eigen::MatrixXd r = residuals(g, s.lam, s.data).values();
  const double want = hsic_biased(r.col(0), r.col(1), k, k) + hsic_biased(r.col(0), r.col(2), k, k);
  EXPECT_NEAR(objective(g, s.lam, s.data, k), want, 1e-12 * std::max(1.0, want));
}

TEST(Objective, SmallAtTruthForLargeN) {
  const MixedGraph g = load_graph("iv");
  const Sample s = simulate(g, 20000, 5);
  const KernelSpec k = KernelSpec::polynomial();
  const double at_truth = objective(g, s.lam, s.data, k);
  ParamMatrix off = s.lam;
  off.set(0, 1, s.lam.get(0, 1) + 1.0);
  EXPECT_LT(at_truth, 0.01 * objective(g, off, s.data, k));
}

TEST(Objective, MedianAtTruthDecreasesWithN) {
  const MixedGraph g = load_graph("double_confounder");
  const KernelSpec k = KernelSpec::polynomial();
  double previous = INFINITY;
  for (Eigen::Index n : {250, 2000, 16000}) {
    std::vector<double> values;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Sample s = simulate(g, n, 100 + seed);
      values.push_back(objective(g, s.lam, s.data, k));
    }
    const double m = median(values);
    EXPECT_LT(m, previous) << n;
    previous = m;
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const MixedGraph g = random_admg(4, 0.45, seed);
    if (g.directed_edges().empty())
      continue;
    const Sample s = simulate(g, 120, seed);
    const ParamMatrix at = random_init(g, seed + 1, 2.0);
    for (const KernelSpec &spec : {KernelSpec::polynomial(), KernelSpec::rbf()}) {
      const auto kernels = freeze_kernels(g, at, s.data, spec);
      const Eigen::VectorXd grad = gradient(g, at, s.data, kernels).to_vector();
      Eigen::VectorXd packed;
      const double f = objective_and_gradient(g, at, s.data, kernels, &packed);
      EXPECT_EQ(f, objective(g, at, s.data, kernels));
      EXPECT_EQ(packed, grad);
      const Eigen::VectorXd x = at.to_vector();
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * (1 + std::abs(x[i]));
        ParamMatrix plus = at, minus = at;
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        plus.assign(xp);
        minus.assign(xm);
        const double fd = (objective(g, plus, s.data, kernels) - objective(g, minus, s.data, kernels)) / (2 * h);
        EXPECT_NEAR(grad[i], fd, 1e-5 * std::max(std::abs(fd), 1e-6 * (1 + std::abs(f))))
            << "seed " << seed << " " << spec.describe();
      }
    }
  }
}

TEST(Gradient, ZeroWhenResidualUnused) {
  // c is bidirected to both others, so λ_bc never enters the objective.
  const MixedGraph g({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, {{"a", "c"}, {"b", "c"}});
  const Sample s = simulate(g, 100, 6);
  const auto kernels = freeze_kernels(g, s.lam, s.data, KernelSpec::polynomial());
  EXPECT_EQ(gradient(g, s.lam, s.data, kernels).get(1, 2), 0.0);
}

TEST(RegressionInit, ConsistentWithoutConfounding) {
  const MixedGraph g({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}, {"b", "c"}}, {});
  const Sample s = simulate(g, 100000, 7);
  const ParamMatrix init = regression_init(g, s.data);
  EXPECT_LT((init.to_vector() - s.lam.to_vector()).cwiseAbs().maxCoeff(), 0.05);
}

TEST(RegressionInit, ScalarOlsOnIv) {
  const MixedGraph g = load_graph("iv");
  const Sample s = simulate(g, 5000, 8);
  const Eigen::MatrixXd x = s.data.values();
  const Eigen::VectorXd a = x.col(0).array() - x.col(0).mean(), b = x.col(1).array() - x.col(1).mean();
  const double want = a.dot(b) / a.dot(a);
  const ParamMatrix init = regression_init(g, s.data);
  EXPECT_NEAR(init.get(0, 1), want, 1e-12 * (1 + std::abs(want)));
  EXPECT_EQ(init.matrix().col(0).squaredNorm(), 0.0);
}

TEST(RegressionInit, RankDeficientParents) {
  const MixedGraph g({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}, {});
  Eigen::MatrixXd x(50, 3);
  Stream st(1, StreamTag::OracleDraw);
  for (Eigen::Index i = 0; i < 50; ++i) {
    x(i, 0) = st.uniform();
    x(i, 1) = 2 * x(i, 0);
    x(i, 2) = st.uniform();
  }
  try {
    regression_init(g, Dataset(g.vertices(), x));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficientParents);
  }
}

TEST(Fit, FromTruthDoesNotIncreaseObjective) {
  const MixedGraph g = load_graph("double_confounder");
  const Sample s = simulate(g, 1000, 9);
  const EstimateResult r = fit(g, s.data, KernelSpec::polynomial(), s.lam, {}, InitKind::TrueValue);
  EXPECT_LE(r.final_objective(), r.objective_trace.front());
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1]);
  EXPECT_EQ(r.init_kind, InitKind::TrueValue);
  EXPECT_EQ(r.kernels.size(), g.size());
}

TEST(Fit, ImprovesOnRegressionForIv) {
  const MixedGraph g = load_graph("iv");
  int better = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Sample s = simulate(g, 4000, 200 + seed);
    const ParamMatrix init = regression_init(g, s.data);
    const EstimateResult r = fit(g, s.data, KernelSpec::polynomial(), init, {}, InitKind::Regression);
    better += normalized_frobenius_loss(r.lam_hat, s.lam) < normalized_frobenius_loss(init, s.lam);
  }
  EXPECT_GE(better, 4);
}

TEST(Fit, MultistartKeepsBest) {
  const MixedGraph g = load_graph("iv");
  const Sample s = simulate(g, 500, 10);
  const KernelSpec k = KernelSpec::polynomial();
  const std::vector<std::pair<ParamMatrix, InitKind>> starts{
      {regression_init(g, s.data), InitKind::Regression}, {random_init(g, 1), InitKind::Random}};
  const EstimateResult best = fit_multistart(g, s.data, k, starts);
  for (const auto &[init, kind] : starts)
    EXPECT_LE(best.final_objective(), fit(g, s.data, k, init, {}, kind).final_objective());
}

TEST(Fit, BindingMismatch) {
  const MixedGraph g = load_graph("iv"), h = load_graph("diamond");
  const Sample s = simulate(g, 50, 11);
  try {
    fit(g, s.data, KernelSpec::polynomial(), ParamMatrix(h));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::BindingMismatch);
  }
}

TEST(Loss, Identities) {
  const MixedGraph g = load_graph("diamond");
  const ParamMatrix lam = sample_parameters(g, 1);
  ParamMatrix twice(g);
  twice.assign(2 * lam.to_vector());
  EXPECT_EQ(normalized_frobenius_loss(lam, lam), 0.0);
  EXPECT_NEAR(normalized_frobenius_loss(twice, lam), 1.0, 1e-15);
  EXPECT_NEAR(normalized_frobenius_loss(ParamMatrix(g), lam), 1.0, 1e-15);
  try {
    normalized_frobenius_loss(lam, ParamMatrix(g));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroTrueMatrix);
  }
}

TEST(InitKinds, Names) {
  EXPECT_EQ(to_string(InitKind::Regression), "regression");
  EXPECT_EQ(to_string(InitKind::TrueValue), "true-value");
  EXPECT_EQ(to_string(InitKind::Random), "random");
}
