#include "dpmlap/density.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace dpmlap {

Grid make_grid(const Eigen::VectorXd& y, int n_points, double pad) {
  if (n_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (y.size() < 1) throw std::invalid_argument("empty data vector");
  const double lo = y.minCoeff() - pad;
  const double hi = y.maxCoeff() + pad;
  if (!(hi > lo)) throw std::invalid_argument("degenerate data range");
  Grid g;
  g.dx = (hi - lo) / (n_points - 1);
  g.points = Eigen::VectorXd::LinSpaced(n_points, lo, hi);
  return g;
}

Eigen::VectorXd ordinates(double sigma, const Eigen::VectorXd& pi,
                          const Eigen::VectorXd& theta, const Grid& grid) {
  if (pi.size() != theta.size())
    throw std::invalid_argument("weights/locations size mismatch");
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
  const double inv_2s2 = 0.5 / (sigma * sigma);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(grid.points.size());
  for (Eigen::Index h = 0; h < pi.size(); ++h) {
    if (pi[h] == 0.0) continue;
    f += (pi[h] * norm) *
         (-(grid.points.array() - theta[h]).square() * inv_2s2).exp().matrix();
  }
  return f;
}

Eigen::VectorXd ordinates(const ModelConfig& cfg, const UnconstrainedParams& p,
                          const Grid& grid) {
  const StickWeights sw = stick_transform(p.R());
  return ordinates(cfg.sigma, sw.pi, p.theta(), grid);
}

DensityEnsemble ensemble_from_unconstrained(const ModelConfig& cfg,
                                            const Eigen::MatrixXd& draws,
                                            const Grid& grid, std::string tag) {
  if (draws.rows() < 1) throw std::invalid_argument("ensemble needs draws");
  DensityEnsemble ens;
  ens.grid = grid;
  ens.method_tag = std::move(tag);
  ens.ords.resize(draws.rows(), grid.points.size());
  for (Eigen::Index t = 0; t < draws.rows(); ++t) {
    const UnconstrainedParams p(draws.row(t).transpose());
    ens.ords.row(t) = ordinates(cfg, p, grid).transpose();
  }
  return ens;
}

Eigen::VectorXd posterior_mean_density(const DensityEnsemble& ens) {
  if (ens.ords.rows() < 1) throw std::invalid_argument("empty ensemble");
  return ens.ords.colwise().mean();
}

void write_ensemble_csv(const DensityEnsemble& ens, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < ens.grid.points.size(); ++r)
    out << (r ? "," : "") << ens.grid.points[r];
  out << "\n";
  for (Eigen::Index t = 0; t < ens.ords.rows(); ++t) {
    for (Eigen::Index r = 0; r < ens.ords.cols(); ++r)
      out << (r ? "," : "") << ens.ords(t, r);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dpmlap
