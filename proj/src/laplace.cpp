#include "dpmlap/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dpmlap/rng.hpp"

namespace dpmlap {

namespace {

double empirical_quantile(std::vector<double> sorted, double level) {
  const auto n = sorted.size();
  if (n == 1) return sorted[0];
  const double idx = level * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = std::min(lo + 1, n - 1);
  const double w = idx - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

ModeResult run_opt(const ModelConfig& cfg, const Eigen::VectorXd& y,
                   const UnconstrainedParams& init, const ModeOptions& opts) {
  auto fn = [&cfg, &y](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return log_posterior_with_gradient(cfg, UnconstrainedParams(x), y, g);
  };
  OptimOptions oo;
  oo.grad_tol = opts.grad_tol;
  oo.max_iters = opts.max_iters;
  const OptimResult r = maximize(fn, init.x, oo);
  ModeResult out;
  out.point = UnconstrainedParams(r.x);
  out.value = r.value;
  out.grad_sup_norm = r.grad_sup_norm;
  out.iters = r.iters;
  out.converged = r.converged;
  return out;
}

}  // namespace

UnconstrainedParams default_init(const ModelConfig& cfg, const Eigen::VectorXd& y) {
  cfg.validate();
  if (y.size() < 1) throw std::invalid_argument("empty data vector");
  std::vector<double> sorted(y.data(), y.data() + y.size());
  std::sort(sorted.begin(), sorted.end());

  Eigen::VectorXd R = Eigen::VectorXd::Constant(cfg.K - 1, -std::log(cfg.alpha));
  Eigen::VectorXd theta(cfg.K);
  for (int h = 0; h < cfg.K; ++h)
    theta[h] = empirical_quantile(sorted, (h + 0.5) / cfg.K);
  return UnconstrainedParams(R, theta);
}

ModeResult find_mode(const ModelConfig& cfg, const Eigen::VectorXd& y,
                     const UnconstrainedParams& init, const ModeOptions& opts) {
  ModeResult best = run_opt(cfg, y, init, opts);
  if (opts.restarts > 0) {
    const double ysd = std::sqrt(
        (y.array() - y.mean()).square().sum() / std::max<double>(1.0, y.size() - 1.0));
    const double jit = 0.5 * std::max(ysd, 1e-3);
    Rng rng(derive_seed(opts.restart_seed, "mode-restart"));
    for (int s = 0; s < opts.restarts; ++s) {
      UnconstrainedParams start = init;
      for (int h = 0; h < cfg.K; ++h) start.theta()[h] += jit * draw_normal(rng);
      const ModeResult cand = run_opt(cfg, y, start, opts);
      if (cand.value > best.value) best = cand;
    }
  }
  return best;
}

LaplaceFit fit_from_hessian(const UnconstrainedParams& mode, const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols() || H.rows() != mode.x.size())
    throw std::invalid_argument("hessian dimension mismatch");
  const auto d = H.rows();
  const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);

  double jitter = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(-Hs);
  if (llt.info() != Eigen::Success) {
    for (jitter = 1e-8; jitter <= 1e-2 * (1.0 + 1e-12); jitter *= 10.0) {
      llt.compute(-Hs + jitter * I);
      if (llt.info() == Eigen::Success) break;
    }
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "negative Hessian not positive definite at jitter 1e-2; mode finding likely failed");
  }

  LaplaceFit fit;
  fit.mode = mode;
  fit.jitter = jitter;
  fit.cov = llt.solve(I);
  fit.cov = 0.5 * (fit.cov + fit.cov.transpose().eval());
  Eigen::LLT<Eigen::MatrixXd> lltc(fit.cov);
  if (lltc.info() != Eigen::Success)
    throw std::runtime_error("covariance factorization failed");
  fit.chol = lltc.matrixL();
  return fit;
}

LaplaceFit gaussian_from_hessian(const ModelConfig& cfg, const ModeResult& mode,
                                 const Eigen::VectorXd& y) {
  LaplaceFit fit = fit_from_hessian(mode.point, hessian(cfg, mode.point, y));
  fit.opt_iters = mode.iters;
  fit.grad_norm_at_mode = mode.grad_sup_norm;
  return fit;
}

Eigen::MatrixXd sample_gaussian(const LaplaceFit& fit, int N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const auto d = fit.mode.x.size();
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd out(N, d);
  Eigen::VectorXd zv(d);
  for (int t = 0; t < N; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) zv[j] = z(rng);
    out.row(t) = (fit.mode.x + fit.chol * zv).transpose();
  }
  return out;
}

}  // namespace dpmlap
