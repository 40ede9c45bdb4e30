#include "dpmlap/slice.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace dpmlap {

namespace {

std::vector<int> cluster_counts(const std::vector<int>& c, int H) {
  std::vector<int> n_h(H, 0);
  for (int ci : c) ++n_h[ci];
  return n_h;
}

// Escobar-West auxiliary-variable update for a Gamma(a,b) concentration prior.
double update_concentration(double alpha, int n, int k, const GammaPrior& prior,
                            Rng& rng) {
  const double eta = draw_beta(rng, alpha + 1.0, static_cast<double>(n));
  const double rate = prior.rate - std::log(eta);
  const double odds = (prior.shape + k - 1.0) / (n * rate);
  const double p_big = odds / (1.0 + odds);
  if (draw_uniform(rng) < p_big)
    return draw_gamma(rng, prior.shape + k, rate);
  return draw_gamma(rng, prior.shape + k - 1.0, rate);
}

}  // namespace

std::vector<double> stick_pis(const std::vector<double>& V) {
  std::vector<double> pi(V.size());
  double rem = 1.0;
  for (std::size_t h = 0; h < V.size(); ++h) {
    pi[h] = V[h] * rem;
    rem *= 1.0 - V[h];
  }
  return pi;
}

SliceState init_slice_state(const SliceConfig& cfg, const Eigen::VectorXd& y, Rng& rng) {
  if (y.size() < 1) throw std::invalid_argument("empty data vector");
  SliceState st;
  st.alpha = cfg.alpha_prior.shape / cfg.alpha_prior.rate;
  st.H = 1;
  st.V = {draw_beta(rng, 1.0, st.alpha)};
  st.theta = {cfg.m0 + cfg.s0 * draw_normal(rng)};
  st.c.assign(y.size(), 0);
  st.u.resize(y.size());
  const double pi1 = st.V[0];
  for (Eigen::Index i = 0; i < y.size(); ++i) st.u[i] = pi1 * draw_uniform(rng);
  return st;
}

void slice_sweep(SliceState& st, const SliceConfig& cfg, const Eigen::VectorXd& y,
                 Rng& rng) {
  const auto n = y.size();
  const double inv_s2 = 1.0 / (cfg.sigma * cfg.sigma);
  const double inv_s02 = 1.0 / (cfg.s0 * cfg.s0);

  std::vector<int> n_h = cluster_counts(st.c, st.H);

  // (a) atoms
  for (int h = 0; h < st.H; ++h) {
    if (n_h[h] > 0 && !cfg.disable_likelihood) {
      double ysum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (st.c[i] == h) ysum += y[i];
      const double var = 1.0 / (inv_s02 + n_h[h] * inv_s2);
      const double mean = var * (cfg.m0 * inv_s02 + ysum * inv_s2);
      st.theta[h] = mean + std::sqrt(var) * draw_normal(rng);
    } else {
      st.theta[h] = cfg.m0 + cfg.s0 * draw_normal(rng);
    }
  }

  // (b) sticks: V_h ~ Beta(1 + n_h, alpha + sum_{l>h} n_l)
  {
    int tail = 0;
    for (int h = 0; h < st.H; ++h) tail += n_h[h];
    for (int h = 0; h < st.H; ++h) {
      tail -= n_h[h];
      st.V[h] = draw_beta(rng, 1.0 + n_h[h], st.alpha + tail);
    }
  }

  // (c) slices
  std::vector<double> pi = stick_pis(st.V);
  double umin = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    st.u[i] = pi[st.c[i]] * draw_uniform(rng);
    umin = std::min(umin, st.u[i]);
  }

  // (d) extension: grow until the remainder cannot hide a usable component
  double rem = 1.0;
  for (double v : st.V) rem *= 1.0 - v;
  int guard = 0;
  while (rem >= umin) {
    const double v = draw_beta(rng, 1.0, st.alpha);
    st.V.push_back(v);
    st.theta.push_back(cfg.m0 + cfg.s0 * draw_normal(rng));
    pi.push_back(v * rem);
    rem *= 1.0 - v;
    ++st.H;
    if (++guard > 1000000)
      throw std::runtime_error("slice extension failed to terminate");
  }

  // (e) allocations over {h <= H : pi_h > u_i}
  std::vector<int> active;
  std::vector<double> logw;
  for (Eigen::Index i = 0; i < n; ++i) {
    active.clear();
    logw.clear();
    for (int h = 0; h < st.H; ++h) {
      if (pi[h] > st.u[i]) {
        active.push_back(h);
        if (cfg.disable_likelihood) {
          logw.push_back(0.0);
        } else {
          const double d = y[i] - st.theta[h];
          logw.push_back(-0.5 * d * d * inv_s2);
        }
      }
    }
    if (active.empty())
      throw std::runtime_error("empty allocation set after slice extension");
    const double lmax = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (double& lw : logw) {
      lw = std::exp(lw - lmax);
      total += lw;
    }
    double uacc = draw_uniform(rng) * total;
    int pick = active.back();
    for (std::size_t a = 0; a < active.size(); ++a) {
      uacc -= logw[a];
      if (uacc <= 0.0) {
        pick = active[a];
        break;
      }
    }
    st.c[i] = pick;
  }

  // (f) concentration
  if (cfg.update_alpha) {
    n_h = cluster_counts(st.c, st.H);
    int k = 0;
    for (int cnt : n_h)
      if (cnt > 0) ++k;
    st.alpha = update_concentration(st.alpha, static_cast<int>(n), k,
                                    cfg.alpha_prior, rng);
  }

  // drop the tail beyond the last occupied component; it is
  // prior-distributed and re-instantiated on demand
  const int h_max = 1 + *std::max_element(st.c.begin(), st.c.end());
  st.H = h_max;
  st.V.resize(h_max);
  st.theta.resize(h_max);
}

ChainOutput run_slice(const SliceConfig& cfg, const Eigen::VectorXd& y, int iters,
                      int burn_in, std::uint64_t seed) {
  if (iters <= burn_in || burn_in < 0)
    throw std::invalid_argument("need iters > burn_in >= 0");
  Rng rng(seed);
  SliceState st = init_slice_state(cfg, y, rng);

  ChainOutput out;
  out.burn_in = burn_in;
  out.seed = seed;
  out.draws.reserve(iters);
  const auto t0 = std::chrono::steady_clock::now();
  for (int it = 0; it < iters; ++it) {
    slice_sweep(st, cfg, y, rng);
    out.draws.push_back({st.V, st.theta, st.alpha, st.H});
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.seconds = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

TruncatedDraw complete_to_truncation(const SliceSnapshot& snap, int K_out,
                                     const SliceConfig& cfg, Rng& rng) {
  if (K_out < 2) throw std::invalid_argument("K_out must be >= 2");
  TruncatedDraw out;
  out.V.resize(K_out - 1);
  out.theta.resize(K_out);

  const int H = snap.H;
  if (H <= K_out) {
    for (int h = 0; h < K_out - 1; ++h)
      out.V[h] = h < H ? snap.V[h] : draw_beta(rng, 1.0, snap.alpha);
    for (int h = 0; h < K_out; ++h)
      out.theta[h] = h < H ? snap.theta[h] : cfg.m0 + cfg.s0 * draw_normal(rng);
    return out;
  }

  // H > K_out: the stick remainder absorbs all surplus mass; give the
  // remainder slot the atom of the heaviest truncated component
  const std::vector<double> pi = stick_pis(snap.V);
  int best = K_out - 1;
  for (int h = K_out - 1; h < H; ++h)
    if (pi[h] > pi[best]) best = h;
  for (int h = 0; h < K_out - 1; ++h) out.V[h] = snap.V[h];
  for (int h = 0; h < K_out - 1; ++h) out.theta[h] = snap.theta[h];
  out.theta[K_out - 1] = snap.theta[best];
  return out;
}

}  // namespace dpmlap
