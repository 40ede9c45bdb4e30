#include "dpmlap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpmlap {

double grid_tv(const Eigen::VectorXd& f, const Eigen::VectorXd& g, double dx) {
  if (f.size() != g.size()) throw std::invalid_argument("grid length mismatch");
  if (!(dx > 0.0)) throw std::invalid_argument("dx must be positive");
  return 0.5 * (f - g).cwiseAbs().sum() * dx;
}

Eigen::VectorXd pointwise_empirical_tv(const DensityEnsemble& a,
                                       const DensityEnsemble& b, int bins) {
  if (a.ords.rows() < 1 || b.ords.rows() < 1)
    throw std::invalid_argument("empty ensemble");
  if (a.grid.points.size() != b.grid.points.size() ||
      (a.grid.points - b.grid.points).lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::invalid_argument("ensembles must share one grid");
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");

  const auto ng = a.grid.points.size();
  const auto na = a.ords.rows();
  const auto nb = b.ords.rows();
  Eigen::VectorXd tv(ng);
  std::vector<double> pa(bins), pb(bins);
  for (Eigen::Index r = 0; r < ng; ++r) {
    const double lo = std::min(a.ords.col(r).minCoeff(), b.ords.col(r).minCoeff());
    const double hi = std::max(a.ords.col(r).maxCoeff(), b.ords.col(r).maxCoeff());
    if (!(hi > lo)) {
      tv[r] = 0.0;
      continue;
    }
    const double w = (hi - lo) / bins;
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    for (Eigen::Index t = 0; t < na; ++t) {
      const int bin = std::min<int>(static_cast<int>((a.ords(t, r) - lo) / w), bins - 1);
      pa[bin] += 1.0 / na;
    }
    for (Eigen::Index t = 0; t < nb; ++t) {
      const int bin = std::min<int>(static_cast<int>((b.ords(t, r) - lo) / w), bins - 1);
      pb[bin] += 1.0 / nb;
    }
    double s = 0.0;
    for (int bIdx = 0; bIdx < bins; ++bIdx) s += std::abs(pa[bIdx] - pb[bIdx]);
    tv[r] = 0.5 * s;
  }
  return tv;
}

ReportPair assemble_report(const std::optional<Eigen::VectorXd>& truth,
                           const DensityEnsemble& lap_ens,
                           const DensityEnsemble& skew_ens,
                           const DensityEnsemble& slice_ens) {
  const double dx = slice_ens.grid.dx;
  const Eigen::VectorXd lap_mean = posterior_mean_density(lap_ens);
  const Eigen::VectorXd skew_mean = posterior_mean_density(skew_ens);
  const Eigen::VectorXd slice_mean = posterior_mean_density(slice_ens);

  ReportPair out;
  out.lap.tv_to_slice_mean = grid_tv(lap_mean, slice_mean, dx);
  out.skew.tv_to_slice_mean = grid_tv(skew_mean, slice_mean, dx);
  out.lap.pointwise_tv = pointwise_empirical_tv(lap_ens, slice_ens);
  out.skew.pointwise_tv = pointwise_empirical_tv(skew_ens, slice_ens);
  if (truth) {
    out.lap.tv_to_truth = grid_tv(lap_mean, *truth, dx);
    out.skew.tv_to_truth = grid_tv(skew_mean, *truth, dx);
  }
  if (out.lap.tv_to_slice_mean >= 1e-12) {
    const double pct =
        100.0 * (1.0 - out.skew.tv_to_slice_mean / out.lap.tv_to_slice_mean);
    out.lap.improvement_pct = pct;
    out.skew.improvement_pct = pct;
  }
  return out;
}

}  // namespace dpmlap
