#pragma once

#include <Eigen/Dense>
#include <optional>

#include "dpmlap/density.hpp"

namespace dpmlap {

struct TVReport {
  std::optional<double> tv_to_truth;
  double tv_to_slice_mean = 0.0;
  Eigen::VectorXd pointwise_tv;  // one entry per grid point, in [0,1]
  std::optional<double> improvement_pct;  // 100*(1 - tv_skew/tv_lap)
};

// 0.5 * sum |f - g| * dx
double grid_tv(const Eigen::VectorXd& f, const Eigen::VectorXd& g, double dx);

// Per grid point, TV between histograms of the posterior ordinate samples,
// binned over the pooled range.
Eigen::VectorXd pointwise_empirical_tv(const DensityEnsemble& a,
                                       const DensityEnsemble& b, int bins = 50);

struct ReportPair {
  TVReport lap;
  TVReport skew;
};

ReportPair assemble_report(const std::optional<Eigen::VectorXd>& truth,
                           const DensityEnsemble& lap_ens,
                           const DensityEnsemble& skew_ens,
                           const DensityEnsemble& slice_ens);

}  // namespace dpmlap
