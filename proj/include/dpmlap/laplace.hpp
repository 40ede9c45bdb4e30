#pragma once

#include <cstdint>

#include "dpmlap/model.hpp"
#include "dpmlap/optim.hpp"

namespace dpmlap {

// Gaussian approximation at the posterior mode: cov = (-H + jitter*I)^{-1}.
struct LaplaceFit {
  UnconstrainedParams mode;
  Eigen::MatrixXd cov;
  Eigen::MatrixXd chol;  // lower triangular, chol * chol^T = cov
  double jitter = 0.0;
  int opt_iters = 0;
  double grad_norm_at_mode = 0.0;
};

struct ModeOptions {
  double grad_tol = 1e-6;
  int max_iters = 10000;
  int restarts = 0;  // extra starts with jittered locations
  std::uint64_t restart_seed = 0;
};

struct ModeResult {
  UnconstrainedParams point;
  double value = 0.0;
  double grad_sup_norm = 0.0;
  int iters = 0;
  bool converged = false;
};

// theta_h at empirical quantile (h-0.5)/K of y, sticks at the Beta(1,alpha)
// prior mean.
UnconstrainedParams default_init(const ModelConfig& cfg, const Eigen::VectorXd& y);

ModeResult find_mode(const ModelConfig& cfg, const Eigen::VectorXd& y,
                     const UnconstrainedParams& init, const ModeOptions& opts = {});

// Core fit from an explicit Hessian; jitter escalates 1e-8 -> 1e-2 by
// factors of 10 until -H + jitter*I factorizes.
LaplaceFit fit_from_hessian(const UnconstrainedParams& mode, const Eigen::MatrixXd& H);

LaplaceFit gaussian_from_hessian(const ModelConfig& cfg, const ModeResult& mode,
                                 const Eigen::VectorXd& y);

// N x (2K-1) matrix of i.i.d. draws mode + chol*z.
Eigen::MatrixXd sample_gaussian(const LaplaceFit& fit, int N, std::uint64_t seed);

}  // namespace dpmlap
