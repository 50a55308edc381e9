// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace admgid {

struct KernelSpec {
  enum class Kind { Polynomial, Rbf };

  Kind kind = Kind::Polynomial;
  /// Polynomial: k(x, y) = (x·y + offset)^degree.
  int degree = 2;
  double offset = 1.0;
  /// Rbf: k(x, y) = exp(−(x−y)² / (2σ²)); empty means median heuristic.
  std::optional<double> bandwidth;

  static KernelSpec polynomial(int degree = 2, double offset = 1.0);
  static KernelSpec rbf(std::optional<double> bandwidth = std::nullopt);

  /// Throws Error{SizeMismatch} for degree < 1, offset < 0 or a
  /// non-positive bandwidth.
  void validate() const;
  bool resolved() const { return kind == Kind::Polynomial || bandwidth.has_value(); }
  std::string describe() const;
};

/// Median of the nonzero pairwise distances |x_i − x_j|, or 1 when all
/// entries coincide.
double median_heuristic(const Eigen::VectorXd &x);

/// Fixes a median-heuristic bandwidth from x; other specs pass through.
KernelSpec resolve(const KernelSpec &spec, const Eigen::VectorXd &x);

double kernel_value(const KernelSpec &k, double a, double b);
/// ∂k(a, b)/∂a.
double kernel_derivative(const KernelSpec &k, double a, double b);

/// A column prepared for repeated HSIC evaluations against other columns.
/// Polynomial kernels use the exact finite feature map
/// φ_j(x) = sqrt(C(d,j) c^{d−j}) x^j (j ≥ 1, centered), so a pair of them
/// costs O(n d²). Every column also keeps the row means of its Gram matrix,
/// which gives centered Gram entries in O(1) for the O(n²) path used by
/// the other kernels.
class HsicColumn {
public:
  HsicColumn(const Eigen::VectorXd &x, const KernelSpec &resolved_spec);

  Eigen::Index size() const noexcept { return x_.size(); }
  const KernelSpec &spec() const noexcept { return spec_; }

  /// HSIC_n(a, b); fills ∂/∂a_i and ∂/∂b_i when the pointers are set.
  friend double hsic_pair(const HsicColumn &a, const HsicColumn &b,
                          Eigen::VectorXd *grad_a, Eigen::VectorXd *grad_b);

private:
  bool uses_features() const { return spec_.kind == KernelSpec::Kind::Polynomial; }
  double centered(Eigen::Index i, Eigen::Index j) const;

  Eigen::VectorXd x_;
  KernelSpec spec_;
  // feature path
  Eigen::MatrixXd phi_;   // centered features, n × d
  Eigen::MatrixXd dphi_;  // φ'_j(x_i), n × d
  // gram path
  Eigen::VectorXd row_mean_;
  double grand_mean_ = 0.0;
};

double hsic_pair(const HsicColumn &a, const HsicColumn &b,
                 Eigen::VectorXd *grad_a, Eigen::VectorXd *grad_b);

/// trace(K_X H K_Y H) / n² with H = I − 11ᵀ/n. Median-heuristic specs are
/// resolved on their own column. Throws Error{LengthMismatch} (also for
/// n < 2).
double hsic_biased(const Eigen::VectorXd &x, const Eigen::VectorXd &y,
                   const KernelSpec &kx, const KernelSpec &ky);

}  // namespace admgid
