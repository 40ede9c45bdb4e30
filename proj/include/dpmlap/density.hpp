#pragma once

#include <Eigen/Dense>
#include <string>

#include "dpmlap/model.hpp"

namespace dpmlap {

struct Grid {
  Eigen::VectorXd points;  // equally spaced, increasing
  double dx = 0.0;
};

// Equally spaced grid over [min(y) - pad, max(y) + pad].
Grid make_grid(const Eigen::VectorXd& y, int n_points, double pad);

// Mixture-density evaluations, one row per posterior draw.
struct DensityEnsemble {
  Grid grid;
  Eigen::MatrixXd ords;  // draws x grid points, nonnegative
  std::string method_tag;
};

Eigen::VectorXd ordinates(double sigma, const Eigen::VectorXd& pi,
                          const Eigen::VectorXd& theta, const Grid& grid);
Eigen::VectorXd ordinates(const ModelConfig& cfg, const UnconstrainedParams& p,
                          const Grid& grid);

// Rows of draws are flat [R | theta] vectors.
DensityEnsemble ensemble_from_unconstrained(const ModelConfig& cfg,
                                            const Eigen::MatrixXd& draws,
                                            const Grid& grid, std::string tag);

Eigen::VectorXd posterior_mean_density(const DensityEnsemble& ens);

// First row: grid points; subsequent rows: per-draw ordinates.
void write_ensemble_csv(const DensityEnsemble& ens, const std::string& path);

}  // namespace dpmlap
