#pragma once

#include <Eigen/Dense>

namespace dpmlap {

// Truncated DPM target: Gaussian kernels with fixed scale, Gaussian base
// measure, DP concentration fixed during Laplace fitting.
struct ModelConfig {
  int K = 2;           // truncation level, >= 2
  double alpha = 1.0;  // DP concentration, > 0
  double sigma = 1.0;  // kernel sd, > 0
  double m0 = 0.0;     // base-measure mean
  double s0 = 1.0;     // base-measure sd, > 0

  int dim() const { return 2 * K - 1; }
  void validate() const;
};

// Flat parameter vector with layout [R_1..R_{K-1}, theta_1..theta_K].
struct UnconstrainedParams {
  Eigen::VectorXd x;

  UnconstrainedParams() = default;
  explicit UnconstrainedParams(Eigen::VectorXd flat);
  UnconstrainedParams(const Eigen::VectorXd& R, const Eigen::VectorXd& theta);

  int K() const { return static_cast<int>((x.size() + 1) / 2); }
  auto R() const { return x.head(K() - 1); }
  auto R() { return x.head(K() - 1); }
  auto theta() const { return x.tail(K()); }
  auto theta() { return x.tail(K()); }
};

// Stick weights; pi_K takes the stick remainder so the weights sum to one.
struct StickWeights {
  Eigen::VectorXd V;   // K-1 sticks in (0,1)
  Eigen::VectorXd pi;  // K weights
};

// Log-space companions used by all posterior evaluations.
struct StickLogWeights {
  Eigen::VectorXd V;        // K-1
  Eigen::VectorXd log_v;    // K-1
  Eigen::VectorXd log_1mv;  // K-1
  Eigen::VectorXd log_pi;   // K
};

StickWeights stick_transform(const Eigen::VectorXd& R);
StickLogWeights stick_log_transform(const Eigen::VectorXd& R);

// Inverse of the V map: R_h = log(V_h / (1 - V_h)). The linear-space
// version loses precision once V approaches 1; the log-space overload is
// accurate over the whole range.
Eigen::VectorXd logit_sticks(const Eigen::VectorXd& V);
Eigen::VectorXd logit_sticks(const StickLogWeights& sl);

// Per-observation mixture quantities, computed in log space with one
// max-subtraction per observation.
struct Responsibilities {
  Eigen::VectorXd logm;  // n, log mixture density per observation
  Eigen::MatrixXd r;     // n x K, rows sum to 1
  Eigen::MatrixXd A;     // n x (K-1), A_ij = r_ij - V_j * sum_{h>=j} r_ih
};

Responsibilities compute_responsibilities(const ModelConfig& cfg,
                                          const UnconstrainedParams& p,
                                          const Eigen::VectorXd& y);

double log_unnorm_posterior(const ModelConfig& cfg, const UnconstrainedParams& p,
                            const Eigen::VectorXd& y);

Eigen::VectorXd gradient(const ModelConfig& cfg, const UnconstrainedParams& p,
                         const Eigen::VectorXd& y);

// Value and gradient from one shared Responsibilities pass.
double log_posterior_with_gradient(const ModelConfig& cfg, const UnconstrainedParams& p,
                                   const Eigen::VectorXd& y, Eigen::VectorXd& grad);

Eigen::MatrixXd hessian(const ModelConfig& cfg, const UnconstrainedParams& p,
                        const Eigen::VectorXd& y);

// Overflow-safe logistic helpers.
double sigmoid(double r);
double softplus(double r);  // log(1 + e^r)

}  // namespace dpmlap
