// SPDX-License-Identifier: Apache-2.0

#include "admgid/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "admgid/error.hpp"

namespace admgid {

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  KernelSpec k;
  k.kind = Kind::Polynomial;
  k.degree = degree;
  k.offset = offset;
  k.validate();
  return k;
}

KernelSpec KernelSpec::rbf(std::optional<double> bandwidth) {
  KernelSpec k;
  k.kind = Kind::Rbf;
  k.bandwidth = bandwidth;
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (kind == Kind::Polynomial) {
    if (degree < 1)
      throw Error(ErrorCode::SizeMismatch, "polynomial degree must be >= 1");
    if (!(offset >= 0.0 && std::isfinite(offset)))
      throw Error(ErrorCode::SizeMismatch, "polynomial offset must be finite and >= 0");
  } else if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth))) {
    throw Error(ErrorCode::SizeMismatch, "rbf bandwidth must be positive");
  }
}

std::string KernelSpec::describe() const {
  if (kind == Kind::Polynomial)
    return "poly(d=" + std::to_string(degree) + ",c=" + std::to_string(offset) + ")";
  return bandwidth ? "rbf(sigma=" + std::to_string(*bandwidth) + ")" : "rbf(median)";
}

double median_heuristic(const Eigen::VectorXd &x) {
  std::vector<double> d;
  const Eigen::Index n = x.size();
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (double dist = std::abs(x[i] - x[j]); dist > 0.0)
        d.push_back(dist);
  if (d.empty())
    return 1.0;
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + mid, d.end());
  const double upper = d[mid];
  if (d.size() % 2 == 1)
    return upper;
  const double lower = *std::max_element(d.begin(), d.begin() + mid);
  return 0.5 * (lower + upper);
}

KernelSpec resolve(const KernelSpec &spec, const Eigen::VectorXd &x) {
  spec.validate();
  KernelSpec out = spec;
  if (out.kind == KernelSpec::Kind::Rbf && !out.bandwidth)
    out.bandwidth = median_heuristic(x);
  return out;
}

double kernel_value(const KernelSpec &k, double a, double b) {
  if (k.kind == KernelSpec::Kind::Polynomial)
    return std::pow(a * b + k.offset, k.degree);
  const double s = *k.bandwidth;
  return std::exp(-(a - b) * (a - b) / (2.0 * s * s));
}

double kernel_derivative(const KernelSpec &k, double a, double b) {
  if (k.kind == KernelSpec::Kind::Polynomial)
    return k.degree * std::pow(a * b + k.offset, k.degree - 1) * b;
  const double s2 = *k.bandwidth * *k.bandwidth;
  return -(a - b) / s2 * std::exp(-(a - b) * (a - b) / (2.0 * s2));
}

HsicColumn::HsicColumn(const Eigen::VectorXd &x, const KernelSpec &resolved_spec)
    : x_(x), spec_(resolved_spec) {
  if (!spec_.resolved())
    throw Error(ErrorCode::SizeMismatch, "kernel bandwidth not resolved");
  spec_.validate();
  const Eigen::Index n = x.size();

  if (uses_features()) {
    const int d = spec_.degree;
    // Raw features j = 0..d; the constant j = 0 feature only matters for
    // the uncentered row means.
    Eigen::MatrixXd raw(n, d + 1);
    dphi_.resize(n, d);
    for (int j = 0; j <= d; ++j) {
      const double coef = std::sqrt(std::tgamma(d + 1.0) /
                                    (std::tgamma(j + 1.0) * std::tgamma(d - j + 1.0)) *
                                    std::pow(spec_.offset, d - j));
      for (Eigen::Index i = 0; i < n; ++i) {
        raw(i, j) = coef * std::pow(x[i], j);
        if (j > 0)
          dphi_(i, j - 1) = coef * j * std::pow(x[i], j - 1);
      }
    }
    const Eigen::RowVectorXd mean = raw.colwise().mean();
    row_mean_ = raw * mean.transpose();
    grand_mean_ = mean.squaredNorm();
    // Shift by the first row before centering: a constant column then
    // centers to exactly zero instead of rounding residue.
    const Eigen::MatrixXd shifted = raw.rightCols(d).rowwise() - raw.row(0).tail(d);
    phi_ = shifted.rowwise() - shifted.colwise().mean();
  } else {
    row_mean_ = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        row_mean_[i] += kernel_value(spec_, x_[i], x_[j]);
    row_mean_ /= static_cast<double>(n);
    grand_mean_ = row_mean_.mean();
  }
}

double HsicColumn::centered(Eigen::Index i, Eigen::Index j) const {
  return kernel_value(spec_, x_[i], x_[j]) - row_mean_[i] - row_mean_[j] + grand_mean_;
}

double hsic_pair(const HsicColumn &a, const HsicColumn &b, Eigen::VectorXd *grad_a,
                 Eigen::VectorXd *grad_b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::LengthMismatch, "HSIC inputs differ in length");
  const Eigen::Index n = a.size();
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));

  if (a.uses_features() && b.uses_features()) {
    const Eigen::MatrixXd c = a.phi_.transpose() * b.phi_;
    if (grad_a)
      *grad_a = 2.0 * scale * (a.dphi_.array() * (b.phi_ * c.transpose()).array()).rowwise().sum();
    if (grad_b)
      *grad_b = 2.0 * scale * (b.dphi_.array() * (a.phi_ * c).array()).rowwise().sum();
    return scale * c.squaredNorm();
  }

  // trace(K H L H) = Σ_ik (HKH)_ik (HLH)_ik since H is idempotent; centering
  // both sides makes a constant column contribute exactly zero. The gradient
  // in a_i is 2 Σ_k ∂₁k(a_i, a_k) (HLH)_ik, and symmetrically for b.
  double value = 0.0;
  if (grad_a)
    grad_a->setZero(n);
  if (grad_b)
    grad_b->setZero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double lb = b.centered(i, k), la = a.centered(i, k);
      value += la * lb;
      if (grad_a)
        (*grad_a)[i] += kernel_derivative(a.spec_, a.x_[i], a.x_[k]) * lb;
      if (grad_b)
        (*grad_b)[i] += kernel_derivative(b.spec_, b.x_[i], b.x_[k]) * la;
    }
  }
  if (grad_a)
    *grad_a *= 2.0 * scale;
  if (grad_b)
    *grad_b *= 2.0 * scale;
  return scale * value;
}

double hsic_biased(const Eigen::VectorXd &x, const Eigen::VectorXd &y,
                   const KernelSpec &kx, const KernelSpec &ky) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "HSIC inputs differ in length: " +
                                               std::to_string(x.size()) + " vs " +
                                               std::to_string(y.size()));
  if (x.size() < 2)
    throw Error(ErrorCode::LengthMismatch, "HSIC needs n >= 2");
  const HsicColumn a(x, resolve(kx, x));
  const HsicColumn b(y, resolve(ky, y));
  // Fixed argument order makes the result bitwise symmetric.
  const bool swap = std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end());
  return swap ? hsic_pair(b, a, nullptr, nullptr) : hsic_pair(a, b, nullptr, nullptr);
}

}  // namespace admgid
