#include "dpmlap/skew.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "dpmlap/rng.hpp"

namespace dpmlap {

SkewWeightContext make_skew_context(const ModelConfig& cfg, const LaplaceFit& fit,
                                    Eigen::VectorXd y) {
  SkewWeightContext ctx;
  ctx.fit = fit;
  ctx.log_unnorm = [cfg, y = std::move(y)](const Eigen::VectorXd& p) {
    return log_unnorm_posterior(cfg, UnconstrainedParams(p), y);
  };
  return ctx;
}

double skew_weight(const SkewWeightContext& ctx, const Eigen::VectorXd& p) {
  const Eigen::VectorXd refl = 2.0 * ctx.fit.mode.x - p;
  const double diff = ctx.log_unnorm(p) - ctx.log_unnorm(refl);
  return std::clamp(sigmoid(diff), 0.0, 1.0);
}

SkewSample sample_skew_laplace(const LaplaceFit& fit, const WeightFn& w, int N,
                               std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const auto d = fit.mode.x.size();
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SkewSample out;
  out.draws.resize(N, d);
  Eigen::VectorXd zv(d);
  double wsum = 0.0;
  for (int t = 0; t < N; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) zv[j] = z(rng);
    const Eigen::VectorXd prop = fit.mode.x + fit.chol * zv;
    const double wt = w(prop);
    wsum += wt;
    if (unif(rng) < wt) {
      out.draws.row(t) = prop.transpose();
      ++out.kept;
    } else {
      out.draws.row(t) = (2.0 * fit.mode.x - prop).transpose();
    }
  }
  out.mean_weight = wsum / N;
  return out;
}

SkewSample sample_skew_laplace(const SkewWeightContext& ctx, int N,
                               std::uint64_t seed) {
  return sample_skew_laplace(
      ctx.fit, [&ctx](const Eigen::VectorXd& p) { return skew_weight(ctx, p); }, N,
      seed);
}

}  // namespace dpmlap
