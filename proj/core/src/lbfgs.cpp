// SPDX-License-Identifier: Apache-2.0

#include "admgid/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

namespace admgid {

namespace {

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // φ'(α) = ∇f(x + α d) · d
  Eigen::VectorXd x;
  Eigen::VectorXd g;
};

class LineSearch {
public:
  LineSearch(const ObjectiveFn &fn, const Eigen::VectorXd &x, const Eigen::VectorXd &d,
             const Point &start, double alpha_max, const LbfgsOptions &opts)
      : fn_(fn), x_(x), d_(d), start_(start), alpha_max_(alpha_max), opts_(opts) {}

  // Returns true with `out` set to an accepted point.
  bool run(double alpha, Point &out) {
    Point prev = start_;
    for (int i = 0; i < opts_.max_line_search; ++i) {
      Point cur = eval(alpha);
      if (!std::isfinite(cur.f) || !armijo(cur) || (i > 0 && cur.f >= prev.f))
        return zoom(prev, cur, out);
      if (std::abs(cur.slope) <= -opts_.c2 * start_.slope) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0)
        return zoom(cur, prev, out);
      if (alpha >= alpha_max_) {
        // Box edge reached with sufficient decrease; take it.
        out = std::move(cur);
        return true;
      }
      prev = std::move(cur);
      alpha = std::min(2.0 * alpha, alpha_max_);
    }
    return fallback(out);
  }

private:
  Point eval(double alpha) {
    Point p;
    p.alpha = alpha;
    p.x = x_ + alpha * d_;
    p.f = fn_(p.x, p.g);
    p.slope = std::isfinite(p.f) ? p.g.dot(d_) : std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(p.f) && armijo(p) && (!best_ || p.f < best_->f))
      best_ = p;
    return p;
  }

  bool armijo(const Point &p) const {
    return p.f <= start_.f + opts_.c1 * p.alpha * start_.slope;
  }

  bool zoom(Point lo, Point hi, Point &out) {
    for (int i = 0; i < opts_.max_line_search; ++i) {
      const double a = interpolate(lo, hi);
      Point cur = eval(a);
      if (!std::isfinite(cur.f) || !armijo(cur) || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -opts_.c2 * start_.slope) {
          out = std::move(cur);
          return true;
        }
        if (cur.slope * (hi.alpha - lo.alpha) >= 0)
          hi = lo;
        lo = std::move(cur);
      }
      if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, lo.alpha))
        break;
    }
    return fallback(out);
  }

  // Cubic minimizer of the Hermite interpolant, safeguarded to the middle
  // 80% of the bracket; bisection when the data are unusable.
  static double interpolate(const Point &lo, const Point &hi) {
    const double a = lo.alpha, b = hi.alpha;
    const double width = b - a;
    double t = 0.5;
    if (std::isfinite(hi.f) && std::isfinite(hi.slope)) {
      const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
      const double disc = d1 * d1 - lo.slope * hi.slope;
      if (disc >= 0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double c = b - (b - a) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2 * d2);
        if (std::isfinite(c))
          t = (c - a) / width;
      }
    }
    t = std::clamp(t, 0.1, 0.9);
    return a + t * width;
  }

  // Settle for the best sufficient-decrease point seen.
  bool fallback(Point &out) {
    if (!best_)
      return false;
    out = std::move(*best_);
    return true;
  }

  const ObjectiveFn &fn_;
  const Eigen::VectorXd &x_;
  const Eigen::VectorXd &d_;
  const Point &start_;
  double alpha_max_;
  const LbfgsOptions &opts_;
  std::optional<Point> best_;
};

Eigen::VectorXd project(Eigen::VectorXd x, double bound) {
  if (std::isfinite(bound))
    x = x.cwiseMax(-bound).cwiseMin(bound);
  return x;
}

// Coordinates pinned at the box with the gradient pushing outward.
std::vector<bool> active_set(const Eigen::VectorXd &x, const Eigen::VectorXd &g, double bound) {
  std::vector<bool> active(x.size(), false);
  if (!std::isfinite(bound))
    return active;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    active[i] = (x[i] <= -bound && g[i] > 0) || (x[i] >= bound && g[i] < 0);
  return active;
}

}  // namespace

LbfgsResult minimize_lbfgs(const ObjectiveFn &fn, Eigen::VectorXd x0, const LbfgsOptions &opts) {
  LbfgsResult res;
  Point cur;
  cur.x = project(std::move(x0), opts.bound);
  cur.f = fn(cur.x, cur.g);
  res.x = cur.x;
  res.f = cur.f;
  res.trace.push_back(cur.f);
  if (!std::isfinite(cur.f)) {
    res.diverged = true;
    res.reason = "objective not finite at the starting point";
    return res;
  }
  if (cur.x.size() == 0) {
    res.converged = true;
    res.reason = "no free parameters";
    return res;
  }

  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y)
  int stalled = 0;
  for (res.iterations = 0; res.iterations < opts.max_iterations;) {
    const auto active = active_set(cur.x, cur.g, opts.bound);
    Eigen::VectorXd pg = cur.g;
    for (Eigen::Index i = 0; i < pg.size(); ++i)
      if (active[i])
        pg[i] = 0.0;
    if (pg.lpNorm<Eigen::Infinity>() <= opts.gradient_tolerance * std::max(1.0, std::abs(cur.f))) {
      res.converged = true;
      res.reason = "projected gradient below tolerance";
      break;
    }

    // Two-loop recursion on the free coordinates.
    Eigen::VectorXd q = pg;
    std::vector<double> alphas(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
      const auto &[s, y] = memory[k];
      alphas[k] = s.dot(q) / y.dot(s);
      q -= alphas[k] * y;
    }
    if (!memory.empty()) {
      const auto &[s, y] = memory.back();
      q *= s.dot(y) / y.dot(y);
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const auto &[s, y] = memory[k];
      q += (alphas[k] - y.dot(q) / y.dot(s)) * s;
    }
    Eigen::VectorXd d = -q;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (active[i])
        d[i] = 0.0;
    bool fresh = memory.empty();
    if (!(d.dot(cur.g) < 0)) {
      memory.clear();
      d = -pg;
      fresh = true;
    }

    double alpha_max = std::numeric_limits<double>::infinity();
    if (std::isfinite(opts.bound)) {
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] > 0)
          alpha_max = std::min(alpha_max, (opts.bound - cur.x[i]) / d[i]);
        else if (d[i] < 0)
          alpha_max = std::min(alpha_max, (-opts.bound - cur.x[i]) / d[i]);
      }
    }
    if (!(alpha_max > 0)) {
      res.converged = true;
      res.reason = "no feasible descent direction inside the box";
      break;
    }
    double alpha0 = fresh ? std::min(1.0, 1.0 / d.lpNorm<Eigen::Infinity>()) : 1.0;
    alpha0 = std::min(alpha0, alpha_max);

    cur.slope = cur.g.dot(d);
    cur.alpha = 0.0;
    Point next;
    LineSearch ls(fn, cur.x, d, cur, alpha_max, opts);
    if (!ls.run(alpha0, next)) {
      if (!fresh) {
        // Retry once along the projected steepest descent direction.
        memory.clear();
        continue;
      }
      res.reason = "line search found no sufficient decrease";
      res.converged = pg.lpNorm<Eigen::Infinity>() <= 1e-3 * std::max(1.0, std::abs(cur.f)) ||
                      stalled > 0;
      break;
    }
    next.x = project(std::move(next.x), opts.bound);
    if (!std::isfinite(next.f)) {
      res.diverged = true;
      res.reason = "objective became non-finite";
      break;
    }

    Eigen::VectorXd s = next.x - cur.x;
    Eigen::VectorXd y = next.g - cur.g;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (active[i])
        y[i] = 0.0;
    if (s.dot(y) > 1e-12 * y.squaredNorm()) {
      memory.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(memory.size()) > opts.memory)
        memory.pop_front();
    }

    const double decrease = cur.f - next.f;
    cur = std::move(next);
    ++res.iterations;
    res.trace.push_back(cur.f);
    res.x = cur.x;
    res.f = cur.f;

    if (decrease <= opts.stall_tolerance * std::max(1.0, std::abs(cur.f))) {
      if (++stalled >= opts.stall_window) {
        res.converged = true;
        res.reason = "objective decrease stalled";
        break;
      }
    } else {
      stalled = 0;
    }
  }
  if (res.reason.empty())
    res.reason = "iteration limit reached";
  return res;
}

}  // namespace admgid
