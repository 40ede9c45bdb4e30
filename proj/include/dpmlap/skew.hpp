#pragma once

#include <cstdint>
#include <functional>

#include "dpmlap/laplace.hpp"

namespace dpmlap {

using LogDensityFn = std::function<double(const Eigen::VectorXd&)>;
using WeightFn = std::function<double(const Eigen::VectorXd&)>;

// Everything needed to compare the unnormalized posterior at a point
// against its reflection through the Laplace mode, and to propose from
// the fitted Gaussian.
struct SkewWeightContext {
  LaplaceFit fit;
  LogDensityFn log_unnorm;
};

// Binds the DPM log-posterior; the data vector is retained by value so the
// context can outlive the caller's buffers.
SkewWeightContext make_skew_context(const ModelConfig& cfg, const LaplaceFit& fit,
                                    Eigen::VectorXd y);

// w(p) = sigmoid(l(p) - l(2*mode - p)), evaluated from log differences only.
double skew_weight(const SkewWeightContext& ctx, const Eigen::VectorXd& p);

struct SkewSample {
  Eigen::MatrixXd draws;     // N x d
  int kept = 0;              // proposals emitted without reflection
  double mean_weight = 0.0;  // Monte Carlo mean of w over proposals
};

// Proposal-then-reflect i.i.d. sampler.
SkewSample sample_skew_laplace(const SkewWeightContext& ctx, int N,
                               std::uint64_t seed);

// Weight-injectable variant; tests use it to force degenerate weights.
SkewSample sample_skew_laplace(const LaplaceFit& fit, const WeightFn& w, int N,
                               std::uint64_t seed);

}  // namespace dpmlap
