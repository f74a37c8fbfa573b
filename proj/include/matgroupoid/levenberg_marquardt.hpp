#pragma once

// Small dense Levenberg-Marquardt with a finite-difference Jacobian and a
// feasibility predicate that can veto trial points (used as a barrier).

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace matgroupoid {

struct LmOptions {
  int max_iters = 200;
  double fd_step = 1e-7;
  double initial_lambda = 1e-3;
  double cost_floor = 1e-32;      // stop once 0.5 ||r||^2 falls below this
  double step_tol = 1e-15;        // relative step size
  int stall_window = 12;          // accepted steps inspected for stagnation
  double stall_ratio = 1e-4;      // minimum relative cost drop over the window
};

enum class LmStatus { Converged, Stalled, MaxIters, Infeasible };

template <int N>
struct LmResult {
  Eigen::Matrix<double, N, 1> x;
  double norm = std::numeric_limits<double>::infinity();  // ||r(x)||
  int iterations = 0;
  int accepted_steps = 0;
  LmStatus status = LmStatus::MaxIters;
};

/// Central-difference Jacobian of r at x; column i is dr/dx_i.
template <int N, typename ResidualFn>
Eigen::MatrixXd fd_jacobian(ResidualFn&& residual, const Eigen::Matrix<double, N, 1>& x, Eigen::Index m, double step) {
  Eigen::MatrixXd jac(m, N);
  Eigen::VectorXd rp(m), rm(m);
  Eigen::Matrix<double, N, 1> xp = x;
  for (int i = 0; i < N; ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    residual(xp, rp);
    xp[i] = x[i] - h;
    residual(xp, rm);
    xp[i] = x[i];
    jac.col(i) = (rp - rm) / (2.0 * h);
  }
  return jac;
}

/// Minimizes ||r(x)||. residual(x, out) writes m entries; feasible(x) may
/// reject trial points, which raises the damping instead of moving.
/// Stops early once ||r|| < target.
template <int N, typename ResidualFn, typename FeasibleFn>
LmResult<N> levenberg_marquardt(ResidualFn&& residual, FeasibleFn&& feasible, Eigen::Matrix<double, N, 1> x,
                                Eigen::Index m, double target, const LmOptions& opt = {}) {
  using VecN = Eigen::Matrix<double, N, 1>;
  using MatN = Eigen::Matrix<double, N, N>;
  LmResult<N> res;
  res.x = x;
  if (!feasible(x)) {
    res.status = LmStatus::Infeasible;
    return res;
  }
  Eigen::VectorXd r(m), rt(m);
  residual(x, r);
  double cost = 0.5 * r.squaredNorm();
  if (!std::isfinite(cost)) {
    res.status = LmStatus::Infeasible;
    return res;
  }
  double lambda = opt.initial_lambda;
  double window_start_cost = cost;
  int window_count = 0;

  for (int it = 0; it < opt.max_iters; ++it) {
    res.iterations = it + 1;
    if (std::sqrt(2.0 * cost) < target || cost < opt.cost_floor) {
      res.status = LmStatus::Converged;
      break;
    }
    const Eigen::MatrixXd jac = fd_jacobian<N>(residual, x, m, opt.fd_step);
    const MatN a = jac.transpose() * jac;
    const VecN g = jac.transpose() * r;
    bool moved = false;
    while (lambda < 1e16) {
      MatN damped = a;
      for (int i = 0; i < N; ++i) damped(i, i) += lambda * std::max(a(i, i), 1e-12);
      const VecN step = damped.ldlt().solve(-g);
      const VecN xt = x + step;
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      if (step.norm() <= opt.step_tol * (1.0 + x.norm())) break;
      if (!feasible(xt)) {
        lambda *= 10.0;
        continue;
      }
      residual(xt, rt);
      const double ct = 0.5 * rt.squaredNorm();
      if (std::isfinite(ct) && ct < cost) {
        x = xt;
        r.swap(rt);
        cost = ct;
        lambda = std::max(lambda / 3.0, 1e-12);
        moved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!moved) {
      res.status = std::sqrt(2.0 * cost) < target ? LmStatus::Converged : LmStatus::Stalled;
      break;
    }
    ++res.accepted_steps;
    if (++window_count == opt.stall_window) {
      if (cost > window_start_cost * (1.0 - opt.stall_ratio) && std::sqrt(2.0 * cost) >= target) {
        res.status = LmStatus::Stalled;
        break;
      }
      window_start_cost = cost;
      window_count = 0;
    }
  }
  res.x = x;
  res.norm = std::sqrt(2.0 * cost);
  if (res.status == LmStatus::MaxIters && res.norm < target) res.status = LmStatus::Converged;
  return res;
}

}  // namespace matgroupoid
