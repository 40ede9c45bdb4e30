#pragma once

#include <Eigen/Dense>
#include <functional>

namespace dpmlap {

// Returns the objective value at x and fills grad with its gradient.
using ValueGradFn =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct OptimOptions {
  double grad_tol = 1e-6;  // sup-norm of the gradient
  int max_iters = 10000;
  int memory = 10;
};

struct OptimResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_sup_norm = 0.0;
  int iters = 0;
  bool converged = false;
};

// L-BFGS ascent with Armijo backtracking; the objective value never
// decreases across iterations. Non-convergence returns the best point
// seen with converged = false.
OptimResult maximize(const ValueGradFn& fn, const Eigen::VectorXd& x0,
                     const OptimOptions& opts = {});

}  // namespace dpmlap
