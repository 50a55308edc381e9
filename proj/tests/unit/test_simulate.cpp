// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "admgid/error.hpp"
#include "admgid/oracle.hpp"
#include "admgid/random.hpp"
#include "admgid/simulate.hpp"
#include "test_support.hpp"

using namespace admgid;
using admgid::testing::load_document;
using admgid::testing::load_graph;
using admgid::testing::params;

namespace {

ErrorCode code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::ParseError;
}

double corr(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  const Eigen::ArrayXd x = a.array() - a.mean(), y = b.array() - b.mean();
  return (x * y).sum() / std::sqrt((x * x).sum() * (y * y).sum());
}

double excess_kurtosis(const Eigen::VectorXd &a) {
  const Eigen::ArrayXd x = a.array() - a.mean();
  const double m2 = (x * x).mean(), m4 = (x * x * x * x).mean();
  return m4 / (m2 * m2) - 3.0;
}

// Single-column k-statistics from power sums.
double k_stat(const Eigen::VectorXd &x, int order) {
  const double n = static_cast<double>(x.size());
  const double s1 = x.sum(), s2 = x.array().square().sum(), s3 = x.array().cube().sum(),
               s4 = x.array().pow(4).sum();
  switch (order) {
  case 2:
    return (n * s2 - s1 * s1) / (n * (n - 1));
  case 3:
    return (2 * s1 * s1 * s1 - 3 * n * s1 * s2 + n * n * s3) / (n * (n - 1) * (n - 2));
  default:
    return (-6 * std::pow(s1, 4) + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 -
            4 * n * (n + 1) * s1 * s3 + n * n * (n + 1) * s4) /
           (n * (n - 1) * (n - 2) * (n - 3));
  }
}

// Joint k-statistic by polarization of the single-column ones.
double polarized(const Eigen::MatrixXd &m, const std::vector<int> &idx) {
  const int k = static_cast<int>(idx.size());
  double total = 0;
  for (int mask = 1; mask < (1 << k); ++mask) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(m.rows());
    int bits = 0;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) {
        s += m.col(idx[i]);
        ++bits;
      }
    total += ((k - bits) % 2 ? -1.0 : 1.0) * k_stat(s, k);
  }
  double fact = 1;
  for (int i = 2; i <= k; ++i)
    fact *= i;
  return total / fact;
}

}  // namespace

TEST(RandomAdmg, EdgeCounts) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MixedGraph g = random_admg(4, 0.5, seed);
    const auto d = g.directed_edges().size(), b = g.bidirected_edges().size();
    EXPECT_EQ(d + b, 6u);
    EXPECT_GE(d, 1u);
    EXPECT_TRUE(is_acyclic(g));
    EXPECT_EQ(g.vertices(), (std::vector<std::string>{"v1", "v2", "v3", "v4"}));
  }
}

TEST(RandomAdmg, DirectedCountCoversRange) {
  std::vector<int> seen(7, 0);
  for (std::uint64_t seed = 0; seed < 600; ++seed)
    ++seen[random_admg(4, 0.5, seed).directed_edges().size()];
  EXPECT_EQ(seen[0], 0);
  for (int k = 1; k <= 6; ++k)
    EXPECT_NEAR(seen[k], 100, 40) << k;
}

TEST(RandomAdmg, DenseGraphsRespectPairLimits) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MixedGraph g = random_admg(6, 1.0, seed);
    EXPECT_EQ(g.directed_edges().size(), 15u);
    EXPECT_EQ(g.bidirected_edges().size(), 15u);
  }
}

TEST(RandomAdmg, DeterministicAndErrors) {
  const MixedGraph a = random_admg(10, 0.3, 42), b = random_admg(10, 0.3, 42);
  EXPECT_EQ(a.directed_edges(), b.directed_edges());
  EXPECT_EQ(a.bidirected_edges(), b.bidirected_edges());
  EXPECT_EQ(code_of([] { random_admg(3, 0.1, 1); }), ErrorCode::InvalidDensity);
  EXPECT_EQ(code_of([] { random_admg(3, 1.5, 1); }), ErrorCode::InvalidDensity);
}

TEST(SampleParameters, Examples) {
  const MixedGraph g = load_graph("diamond");
  const ParamMatrix lam = sample_parameters(g, 3);
  for (auto [u, v] : g.directed_edges()) {
    EXPECT_NE(lam.get(u, v), 0.0);
    EXPECT_LE(std::abs(lam.get(u, v)), 5.0);
  }
  EXPECT_EQ((lam.matrix().array() != 0.0).count(), 4);

  const MixedGraph empty({"a", "b"}, {}, {{"a", "b"}});
  EXPECT_TRUE(sample_parameters(empty, 1).matrix().isZero(0.0));
}

TEST(SampleParameters, CyclicDrawsAreInvertible) {
  const MixedGraph g = load_graph("two_cycle");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ParamMatrix lam = sample_parameters(g, seed);
    EXPECT_GT(std::abs(1.0 - lam.get(0, 1) * lam.get(1, 0)), 1e-8);
  }
}

TEST(SampleErrors, DiamondIndependencePattern) {
  const MixedGraph g = load_graph("diamond");
  const Eigen::Index n = 100000;
  const Dataset eps = sample_errors(g, ErrorModel{}, n, 5);
  EXPECT_LT(std::abs(corr(eps.values().col(0), eps.values().col(2))), 3 / std::sqrt(double(n)));
}

TEST(SampleErrors, NoConfoundingGivesIndependentLaplace) {
  const MixedGraph g({"a", "b", "c"}, {{"a", "b"}}, {});
  const Eigen::Index n = 100000;
  const Dataset eps = sample_errors(g, ErrorModel{}, n, 8);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(excess_kurtosis(eps.values().col(i)), 3.0, 0.7);  // sd of the estimate is about 0.16
    for (int j = i + 1; j < 3; ++j)
      EXPECT_LT(std::abs(corr(eps.values().col(i), eps.values().col(j))), 4 / std::sqrt(double(n)));
  }
}

TEST(SampleErrors, SharedLatentInducesDependence) {
  const MixedGraph g({"v1", "v2", "v3"}, {}, {{"v1", "v2"}});
  const Eigen::Index n = 100000;
  int dependent = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset eps = sample_errors(g, ErrorModel{}, n, seed);
    dependent += std::abs(corr(eps.values().col(0), eps.values().col(1))) > 5 / std::sqrt(double(n));
    EXPECT_LT(std::abs(corr(eps.values().col(0), eps.values().col(2))), 4.5 / std::sqrt(double(n)));
  }
  EXPECT_GE(dependent, 8);
}

TEST(SampleErrors, UniformKindIsPlatykurtic) {
  const MixedGraph g({"a"}, {}, {});
  ErrorModel m;
  m.kind = ErrorKind::SharedLatentUniform;
  const Dataset eps = sample_errors(g, m, 100000, 2);
  EXPECT_NEAR(excess_kurtosis(eps.values().col(0)), -1.2, 0.05);
}

TEST(SampleErrors, InvalidModel) {
  ErrorModel m;
  m.scale_min = -1;
  EXPECT_EQ(code_of([&] { sample_errors(load_graph("iv"), m, 10, 1); }),
            ErrorCode::InvalidErrorModel);
  ErrorModel f;
  f.kind = ErrorKind::FactorModel;
  EXPECT_EQ(code_of([&] { sample_errors(load_graph("iv"), f, 10, 1); }),
            ErrorCode::InvalidFactorGraph);
}

TEST(FactorErrors, SharedBlockPattern) {
  const GraphDocument doc = load_document("factor_shared_block");
  const Eigen::Index n = 100000;
  const Dataset eps = sample_factor_errors(*doc.factors, n, 3);
  // v1 and v5 share no latent.
  EXPECT_LT(std::abs(corr(eps.values().col(0), eps.values().col(4))), 4 / std::sqrt(double(n)));
  EXPECT_GT(std::abs(corr(eps.values().col(3), eps.values().col(4))), 5 / std::sqrt(double(n)));
}

TEST(FactorErrors, NoLatentsIndependent) {
  const LatentFactorGraph l({"a", "b", "c"}, {}, {});
  const Dataset eps = sample_factor_errors(l, 50000, 1);
  EXPECT_LT(std::abs(corr(eps.values().col(0), eps.values().col(1))), 4 / std::sqrt(50000.0));
}

TEST(FactorErrors, UnitLoadingsGiveEqualCovariances) {
  const LatentFactorGraph l({"a", "b", "c"}, {"l"}, {{"l", "a"}, {"l", "b"}, {"l", "c"}},
                            std::vector<double>{1, 1, 1});
  const Eigen::Index n = 200000;
  const Dataset eps = sample_factor_errors(l, n, 4);
  const Eigen::MatrixXd x = eps.values().rowwise() - eps.values().colwise().mean();
  const Eigen::MatrixXd cov = x.transpose() * x / double(n - 1);
  const double tol = 8 * cov.diagonal().maxCoeff() / std::sqrt(double(n));
  EXPECT_NEAR(cov(0, 1), cov(0, 2), tol);
  EXPECT_NEAR(cov(0, 1), cov(1, 2), tol);
  EXPECT_GT(cov(0, 1), 0);
}

TEST(GenerateData, IvByHand) {
  const MixedGraph g = load_graph("iv");
  const ParamMatrix lam = params(g, {{"v1", "v2", 1}, {"v2", "v3", 1}});
  Eigen::MatrixXd e(1, 3);
  e << 1, 0, 0;
  const Dataset x = generate_data(g, lam, Dataset(g.vertices(), e));
  EXPECT_EQ(x.values(), Eigen::MatrixXd::Ones(1, 3));
}

TEST(GenerateData, ZeroLambdaAndStructuralEquation) {
  const MixedGraph g = load_graph("diamond");
  const Dataset eps = sample_errors(g, ErrorModel{}, 500, 7);
  EXPECT_EQ(generate_data(g, ParamMatrix(g), eps).values(), eps.values());

  const ParamMatrix lam = sample_parameters(g, 7);
  const Eigen::MatrixXd x = generate_data(g, lam, eps).values();
  const Eigen::VectorXd rhs = lam.get(1, 3) * x.col(1) + lam.get(2, 3) * x.col(2) + eps.values().col(3);
  EXPECT_LT((x.col(3) - rhs).cwiseAbs().maxCoeff(), 1e-9 * (1 + x.cwiseAbs().maxCoeff()));
}

TEST(GenerateData, BindingChecks) {
  const MixedGraph g = load_graph("diamond"), h = load_graph("iv");
  const Dataset eps = sample_errors(h, ErrorModel{}, 10, 1);
  EXPECT_EQ(code_of([&] { generate_data(g, ParamMatrix(g), eps); }), ErrorCode::BindingMismatch);
}

TEST(Dataset, RejectsNonFinite) {
  Eigen::MatrixXd m(2, 1);
  m << 1, std::nan("");
  EXPECT_EQ(code_of([&] { Dataset({"a"}, m); }), ErrorCode::NonFiniteData);
  EXPECT_EQ(code_of([&] { Dataset({"a", "b"}, Eigen::MatrixXd(2, 1)); }), ErrorCode::SizeMismatch);
}

TEST(Cumulant, LaplaceVarianceAndConstant) {
  Stream s(1, StreamTag::VertexNoise, {77});
  Eigen::MatrixXd m(200000, 2);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m(i, 0) = s.laplace(1.0);
    m(i, 1) = 3.0;
  }
  EXPECT_NEAR(empirical_cumulant(m, {0, 0}), 2.0, 0.05);
  EXPECT_EQ(empirical_cumulant(m, {1, 1}), 0.0);
  EXPECT_EQ(code_of([&] { empirical_cumulant(m, {0}); }), ErrorCode::UnsupportedOrder);
  EXPECT_EQ(code_of([&] { empirical_cumulant(m, {0, 0, 0, 0, 0}); }), ErrorCode::UnsupportedOrder);
}

TEST(Cumulant, MatchesPowerSumOracle) {
  Stream s(9, StreamTag::VertexNoise, {78});
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd m(12 + rep, 3);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = s.laplace(1.0) + (j == 2 ? m(i, 0) : 0.0);
    for (const std::vector<int> &idx : std::vector<std::vector<int>>{
             {0, 0}, {0, 2}, {1, 1, 1}, {0, 2, 2}, {0, 1, 2}, {2, 2, 2, 2}, {0, 0, 2, 2}, {0, 1, 2, 2}}) {
      const double want = polarized(m, idx), got = empirical_cumulant(m, idx);
      EXPECT_NEAR(got, want, 1e-9 * (1 + std::abs(want)));
    }
  }
}

TEST(Cumulant, OrderTwoIsSampleCovariance) {
  const Dataset eps = sample_errors(load_graph("diamond"), ErrorModel{}, 1000, 3);
  const Eigen::MatrixXd x = eps.values().rowwise() - eps.values().colwise().mean();
  const Eigen::MatrixXd cov = x.transpose() * x / 999.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(empirical_cumulant(eps, {i, j}), cov(i, j), 1e-12 * (1 + std::abs(cov(i, j))));
}

TEST(SimulateProperties, DeterministicDatasets) {
  const MixedGraph g = load_graph("diamond");
  const Dataset a = sample_errors(g, ErrorModel{}, 300, 12), b = sample_errors(g, ErrorModel{}, 300, 12);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_NE(a.values(), sample_errors(g, ErrorModel{}, 300, 13).values());
}

// Errors of vertices in different bidirected components are independent:
// |corr| ≤ 4/√n should hold for nearly every seed.
TEST(SimulateProperties, MarkovDiagnostic) {
  const MixedGraph g = load_graph("iv");
  const Eigen::Index n = 20000;
  int pass = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Dataset eps = sample_errors(g, ErrorModel{}, n, seed);
    for (int j : {1, 2}) {
      ++total;
      pass += std::abs(corr(eps.values().col(0), eps.values().col(j))) <= 4 / std::sqrt(double(n));
    }
  }
  EXPECT_GE(pass, 0.99 * total);
}

TEST(SimulateProperties, OlsRecoversColumnsWithoutConfounding) {
  const MixedGraph g({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}, {});
  const Eigen::Index n = 50000;
  const ParamMatrix lam = sample_parameters(g, 2);
  const Dataset x = generate_data(g, lam, sample_errors(g, ErrorModel{}, n, 2));
  const Eigen::MatrixXd c = x.values().rowwise() - x.values().colwise().mean();
  Eigen::MatrixXd pa(n, 2);
  pa << c.col(1), c.col(2);
  const Eigen::Vector2d beta = pa.colPivHouseholderQr().solve(c.col(3));
  EXPECT_NEAR(beta(0), lam.get(1, 3), 20 / std::sqrt(double(n)) * (1 + std::abs(lam.get(1, 3))));
  EXPECT_NEAR(beta(1), lam.get(2, 3), 20 / std::sqrt(double(n)) * (1 + std::abs(lam.get(2, 3))));
}
