// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace admgid {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 500;
  /// Stop when ||projected gradient||_∞ ≤ gradient_tolerance · max(1, |f|).
  double gradient_tolerance = 1e-6;
  /// Stop when the relative decrease stays below stall_tolerance for
  /// stall_window consecutive iterations.
  double stall_tolerance = 1e-10;
  int stall_window = 3;
  /// Box |x_i| ≤ bound.
  double bound = std::numeric_limits<double>::infinity();
  int max_line_search = 40;
  double c1 = 1e-4;
  double c2 = 0.9;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  /// f at the start and after every accepted step.
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  /// The objective became NaN/Inf at an accepted point (x holds the last
  /// finite iterate).
  bool diverged = false;
  std::string reason;
};

/// Returns f(x) and writes ∇f(x) into grad.
using ObjectiveFn = std::function<double(const Eigen::VectorXd &x, Eigen::VectorXd &grad)>;

/// Projected limited-memory BFGS with a strong-Wolfe line search. Variables
/// sitting on the box with an outward gradient are frozen for the step;
/// the step length is capped so the iterate stays inside the box.
LbfgsResult minimize_lbfgs(const ObjectiveFn &fn, Eigen::VectorXd x0,
                           const LbfgsOptions &opts = {});

}  // namespace admgid
