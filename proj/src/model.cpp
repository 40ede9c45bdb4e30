#include "dpmlap/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpmlap {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

void check_dims(const ModelConfig& cfg, const UnconstrainedParams& p,
                const Eigen::VectorXd& y) {
  cfg.validate();
  if (p.x.size() != cfg.dim())
    throw std::invalid_argument("parameter vector has wrong dimension for K");
  if (y.size() < 1) throw std::invalid_argument("empty data vector");
}

}  // namespace

void ModelConfig::validate() const {
  if (K < 2) throw std::invalid_argument("truncation level K must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be positive");
}

UnconstrainedParams::UnconstrainedParams(Eigen::VectorXd flat) : x(std::move(flat)) {
  if (x.size() % 2 == 0 || x.size() < 1)
    throw std::invalid_argument("flat parameter vector must have odd size 2K-1");
}

UnconstrainedParams::UnconstrainedParams(const Eigen::VectorXd& R,
                                         const Eigen::VectorXd& theta) {
  if (theta.size() != R.size() + 1)
    throw std::invalid_argument("theta must have one more entry than R");
  x.resize(R.size() + theta.size());
  x << R, theta;
}

double sigmoid(double r) {
  if (r >= 0.0) return 1.0 / (1.0 + std::exp(-r));
  const double e = std::exp(r);
  return e / (1.0 + e);
}

double softplus(double r) {
  return r > 0.0 ? r + std::log1p(std::exp(-r)) : std::log1p(std::exp(r));
}

StickWeights stick_transform(const Eigen::VectorXd& R) {
  const auto Km1 = R.size();
  StickWeights out;
  out.V.resize(Km1);
  out.pi.resize(Km1 + 1);
  double rem = 1.0;
  for (Eigen::Index h = 0; h < Km1; ++h) {
    out.V[h] = sigmoid(R[h]);
    out.pi[h] = out.V[h] * rem;
    rem *= 1.0 - out.V[h];
  }
  out.pi[Km1] = rem;  // remainder convention for the truncated last weight
  return out;
}

StickLogWeights stick_log_transform(const Eigen::VectorXd& R) {
  const auto Km1 = R.size();
  StickLogWeights out;
  out.V.resize(Km1);
  out.log_v.resize(Km1);
  out.log_1mv.resize(Km1);
  out.log_pi.resize(Km1 + 1);
  double cum = 0.0;  // sum of log(1 - V_l) over l < h
  for (Eigen::Index h = 0; h < Km1; ++h) {
    out.V[h] = sigmoid(R[h]);
    out.log_v[h] = -softplus(-R[h]);
    out.log_1mv[h] = -softplus(R[h]);
    out.log_pi[h] = out.log_v[h] + cum;
    cum += out.log_1mv[h];
  }
  out.log_pi[Km1] = cum;
  return out;
}

Eigen::VectorXd logit_sticks(const Eigen::VectorXd& V) {
  Eigen::VectorXd R(V.size());
  for (Eigen::Index h = 0; h < V.size(); ++h) {
    if (!(V[h] > 0.0 && V[h] < 1.0))
      throw std::invalid_argument("stick outside (0,1)");
    R[h] = std::log(V[h]) - std::log1p(-V[h]);
  }
  return R;
}

Eigen::VectorXd logit_sticks(const StickLogWeights& sl) {
  return sl.log_v - sl.log_1mv;
}

namespace {

// T_ih = log pi_h + log phi_ih, evaluated column-wise so Eigen can use
// packet math for the exp-heavy part.
Eigen::MatrixXd log_joint_matrix(const ModelConfig& cfg, const StickLogWeights& sl,
                                 const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& y) {
  const double log_norm = -0.5 * kLog2Pi - std::log(cfg.sigma);
  const double inv_2s2 = 0.5 / (cfg.sigma * cfg.sigma);
  Eigen::MatrixXd T(y.size(), cfg.K);
  for (int h = 0; h < cfg.K; ++h)
    T.col(h) = (sl.log_pi[h] + log_norm) -
               ((y.array() - theta[h]).square() * inv_2s2);
  return T;
}

// one arithmetic path for log m_i whether or not r is needed, so the
// value returned by the plain and the gradient-sharing evaluations agree
// bitwise
Eigen::VectorXd mixture_logm(const Eigen::MatrixXd& T, Eigen::MatrixXd* r_out) {
  const Eigen::VectorXd tmax = T.rowwise().maxCoeff();
  const Eigen::MatrixXd E = (T.colwise() - tmax).array().exp();
  const Eigen::VectorXd s = E.rowwise().sum();
  if (r_out) *r_out = E.array().colwise() / s.array();
  return (tmax.array() + s.array().log()).matrix();
}

double assemble_log_posterior(const ModelConfig& cfg, const StickLogWeights& sl,
                              const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& logm) {
  double ll = sl.log_v.sum() + cfg.alpha * sl.log_1mv.sum();
  const double inv_2s02 = 0.5 / (cfg.s0 * cfg.s0);
  const double g0_norm = -0.5 * kLog2Pi - std::log(cfg.s0);
  for (int h = 0; h < cfg.K; ++h) {
    const double d = theta[h] - cfg.m0;
    ll += g0_norm - d * d * inv_2s02;
  }
  return ll + logm.sum();
}

}  // namespace

Responsibilities compute_responsibilities(const ModelConfig& cfg,
                                          const UnconstrainedParams& p,
                                          const Eigen::VectorXd& y) {
  check_dims(cfg, p, y);
  const int K = cfg.K;
  const StickLogWeights sl = stick_log_transform(p.R());
  const Eigen::MatrixXd T = log_joint_matrix(cfg, sl, p.theta(), y);

  Responsibilities out;
  out.logm = mixture_logm(T, &out.r);

  // A_ij = r_ij - V_j * (suffix sum of r from j), filled right to left
  out.A.resize(y.size(), K - 1);
  Eigen::VectorXd tail = out.r.col(K - 1);
  for (int j = K - 2; j >= 0; --j) {
    tail += out.r.col(j);
    out.A.col(j) = out.r.col(j) - sl.V[j] * tail;
  }
  return out;
}

double log_unnorm_posterior(const ModelConfig& cfg, const UnconstrainedParams& p,
                            const Eigen::VectorXd& y) {
  check_dims(cfg, p, y);
  const StickLogWeights sl = stick_log_transform(p.R());
  const Eigen::VectorXd theta = p.theta();
  const Eigen::VectorXd logm =
      mixture_logm(log_joint_matrix(cfg, sl, theta, y), nullptr);
  return assemble_log_posterior(cfg, sl, theta, logm);
}

double log_posterior_with_gradient(const ModelConfig& cfg, const UnconstrainedParams& p,
                                   const Eigen::VectorXd& y, Eigen::VectorXd& grad) {
  const Responsibilities resp = compute_responsibilities(cfg, p, y);
  const int K = cfg.K;
  const StickLogWeights sl = stick_log_transform(p.R());
  const Eigen::VectorXd theta = p.theta();
  const double inv_s2 = 1.0 / (cfg.sigma * cfg.sigma);
  const double inv_s02 = 1.0 / (cfg.s0 * cfg.s0);

  grad.resize(cfg.dim());
  for (int j = 0; j < K - 1; ++j)
    grad[j] = 1.0 - (1.0 + cfg.alpha) * sl.V[j] + resp.A.col(j).sum();
  for (int h = 0; h < K; ++h) {
    const double rsum = resp.r.col(h).sum();
    const double rdoty = resp.r.col(h).dot(y);
    grad[K - 1 + h] = -(theta[h] - cfg.m0) * inv_s02 + (rdoty - theta[h] * rsum) * inv_s2;
  }

  return assemble_log_posterior(cfg, sl, theta, resp.logm);
}

Eigen::VectorXd gradient(const ModelConfig& cfg, const UnconstrainedParams& p,
                         const Eigen::VectorXd& y) {
  Eigen::VectorXd g;
  log_posterior_with_gradient(cfg, p, y, g);
  return g;
}

Eigen::MatrixXd hessian(const ModelConfig& cfg, const UnconstrainedParams& p,
                        const Eigen::VectorXd& y) {
  const Responsibilities resp = compute_responsibilities(cfg, p, y);
  const int K = cfg.K;
  const auto n = y.size();
  const StickLogWeights sl = stick_log_transform(p.R());
  const Eigen::VectorXd theta = p.theta();
  const double inv_s2 = 1.0 / (cfg.sigma * cfg.sigma);
  const double inv_s02 = 1.0 / (cfg.s0 * cfg.s0);
  const int d = cfg.dim();

  // D_ih = (y_i - theta_h) / sigma^2, W = r .* D
  Eigen::MatrixXd D(n, K);
  for (int h = 0; h < K; ++h) D.col(h) = (y.array() - theta[h]) * inv_s2;
  const Eigen::MatrixXd W = resp.r.cwiseProduct(D);

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);

  // R-R block
  const Eigen::VectorXd colsumA = resp.A.colwise().sum();
  const Eigen::MatrixXd AtA = resp.A.transpose() * resp.A;
  for (int j = 0; j < K - 1; ++j) {
    const double vj = sl.V[j];
    H(j, j) = -(1.0 + cfg.alpha) * vj * (1.0 - vj) + (1.0 - 2.0 * vj) * colsumA[j] - AtA(j, j);
    for (int k = j + 1; k < K - 1; ++k) {
      const double off = -vj * colsumA[k] - AtA(j, k);
      H(j, k) = off;
      H(k, j) = off;
    }
  }

  // theta-theta block
  const Eigen::MatrixXd WtW = W.transpose() * W;
  for (int h = 0; h < K; ++h) {
    const int a = K - 1 + h;
    const double rsum = resp.r.col(h).sum();
    const double rD2 = resp.r.col(h).dot(D.col(h).cwiseProduct(D.col(h)).eval());
    H(a, a) = -inv_s02 - rsum * inv_s2 + rD2 - WtW(h, h);
    for (int k = h + 1; k < K; ++k) {
      const int b = K - 1 + k;
      H(a, b) = -WtW(h, k);
      H(b, a) = -WtW(h, k);
    }
  }

  // R-theta block: dlogpi(h)/dR_j is (1-V_j) at j==h, -V_j for j<h, 0 for j>h
  const Eigen::VectorXd colsumW = W.colwise().sum();
  const Eigen::MatrixXd AtW = resp.A.transpose() * W;
  for (int j = 0; j < K - 1; ++j) {
    for (int h = 0; h < K; ++h) {
      double c = 0.0;
      if (j == h)
        c = 1.0 - sl.V[j];
      else if (j < h)
        c = -sl.V[j];
      const double val = c * colsumW[h] - AtW(j, h);
      H(j, K - 1 + h) = val;
      H(K - 1 + h, j) = val;
    }
  }

  return H;
}

}  // namespace dpmlap
