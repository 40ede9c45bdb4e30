#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dpmlap/slice.hpp"
#include "test_util.hpp"

using namespace dpmlap;

namespace {

void check_invariants(const SliceState& st, Eigen::Index n) {
  REQUIRE(static_cast<Eigen::Index>(st.c.size()) == n);
  REQUIRE(static_cast<int>(st.V.size()) == st.H);
  REQUIRE(static_cast<int>(st.theta.size()) == st.H);
  CHECK(st.alpha > 0.0);
  const std::vector<double> pi = stick_pis(st.V);
  int total = 0;
  std::vector<int> counts(st.H, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    REQUIRE(st.c[i] >= 0);
    REQUIRE(st.c[i] < st.H);
    CHECK(st.u[i] < pi[st.c[i]]);
    CHECK(st.u[i] > 0.0);
    ++counts[st.c[i]];
    ++total;
  }
  CHECK(total == n);
  for (double v : st.V) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

// Forward draw from the joint model: alpha, sticks/atoms on demand,
// stick-walk allocations, then data.
struct ForwardDraw {
  SliceState state;
  Eigen::VectorXd y;
};

ForwardDraw forward_simulate(const SliceConfig& cfg, int n, Rng& rng) {
  ForwardDraw fwd;
  fwd.state.alpha = draw_gamma(rng, cfg.alpha_prior.shape, cfg.alpha_prior.rate);
  std::vector<double>& V = fwd.state.V;
  std::vector<double>& theta = fwd.state.theta;
  V.clear();
  theta.clear();
  fwd.state.c.resize(n);
  for (int i = 0; i < n; ++i) {
    int h = 0;
    for (;;) {
      if (h == static_cast<int>(V.size())) {
        V.push_back(draw_beta(rng, 1.0, fwd.state.alpha));
        theta.push_back(cfg.m0 + cfg.s0 * draw_normal(rng));
      }
      if (draw_uniform(rng) < V[h]) break;
      ++h;
    }
    fwd.state.c[i] = h;
  }
  const int h_max = 1 + *std::max_element(fwd.state.c.begin(), fwd.state.c.end());
  V.resize(h_max);
  theta.resize(h_max);
  fwd.state.H = h_max;

  fwd.y.resize(n);
  for (int i = 0; i < n; ++i)
    fwd.y[i] = theta[fwd.state.c[i]] + cfg.sigma * draw_normal(rng);

  const std::vector<double> pi = stick_pis(V);
  fwd.state.u.resize(n);
  for (int i = 0; i < n; ++i)
    fwd.state.u[i] = pi[fwd.state.c[i]] * draw_uniform(rng);
  return fwd;
}

double batch_mean_se(const std::vector<double>& x, int batches) {
  const int m = static_cast<int>(x.size()) / batches;
  std::vector<double> bm(batches);
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += x[b * m + i];
    bm[b] = s / m;
  }
  const double mean = std::accumulate(bm.begin(), bm.end(), 0.0) / batches;
  double var = 0.0;
  for (double v : bm) var += (v - mean) * (v - mean);
  var /= (batches - 1);
  return std::sqrt(var / batches);
}

double mean_of(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double var_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double v = 0.0;
  for (double xi : x) v += (xi - m) * (xi - m);
  return v / (x.size() - 1);
}

}  // namespace

TEST_CASE("single observation keeps the invariants") {
  SliceConfig cfg;
  Eigen::VectorXd y(1);
  y << 0.7;
  Rng rng(3);
  SliceState st = init_slice_state(cfg, y, rng);
  for (int it = 0; it < 200; ++it) {
    slice_sweep(st, cfg, y, rng);
    check_invariants(st, 1);
  }
}

TEST_CASE("invariants hold along a run with data") {
  SliceConfig cfg;
  cfg.sigma = 0.8;
  Eigen::VectorXd y(20);
  Rng data_rng(8);
  for (int i = 0; i < 20; ++i)
    y[i] = (i % 2 ? 2.0 : -2.0) + 0.8 * draw_normal(data_rng);
  Rng rng(9);
  SliceState st = init_slice_state(cfg, y, rng);
  for (int it = 0; it < 500; ++it) {
    slice_sweep(st, cfg, y, rng);
    check_invariants(st, 20);
  }
}

TEST_CASE("prior reproduction with the likelihood disabled") {
  SliceConfig cfg;
  cfg.alpha_prior = {1.0, 1.0};  // init alpha = 1
  cfg.update_alpha = false;
  cfg.disable_likelihood = true;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(10);  // unused by the seam
  Rng rng(12345);
  SliceState st = init_slice_state(cfg, y, rng);

  double v1_sum = 0.0;
  const int sweeps = 20000;
  for (int it = 0; it < sweeps; ++it) {
    slice_sweep(st, cfg, y, rng);
    v1_sum += st.V[0];
  }
  const double v1_mean = v1_sum / sweeps;
  CHECK(std::abs(v1_mean - 1.0 / (1.0 + st.alpha)) < 0.02);
}

TEST_CASE("geweke successive-conditional agreement") {
  SliceConfig cfg;
  cfg.sigma = 1.0;
  cfg.m0 = 0.0;
  cfg.s0 = 1.0;
  cfg.alpha_prior = {3.0, 3.0};
  const int n = 5;

  const int M_fwd = 40000;
  std::vector<double> f_ymean, f_theta1, f_alpha;
  {
    Rng rng(777);
    for (int rep = 0; rep < M_fwd; ++rep) {
      const ForwardDraw fwd = forward_simulate(cfg, n, rng);
      f_ymean.push_back(fwd.y.mean());
      f_theta1.push_back(fwd.state.theta[fwd.state.c[0]]);
      f_alpha.push_back(fwd.state.alpha);
    }
  }

  const int M_gibbs = 40000, burn = 2000;
  std::vector<double> g_ymean, g_theta1, g_alpha;
  {
    Rng rng(778);
    ForwardDraw cur = forward_simulate(cfg, n, rng);
    for (int it = 0; it < M_gibbs + burn; ++it) {
      slice_sweep(cur.state, cfg, cur.y, rng);
      for (int i = 0; i < n; ++i)
        cur.y[i] = cur.state.theta[cur.state.c[i]] + cfg.sigma * draw_normal(rng);
      if (it >= burn) {
        g_ymean.push_back(cur.y.mean());
        g_theta1.push_back(cur.state.theta[cur.state.c[0]]);
        g_alpha.push_back(cur.state.alpha);
      }
    }
  }

  auto check_stat = [&](const std::vector<double>& fwd, const std::vector<double>& gibbs,
                        const char* name) {
    const double se_f = std::sqrt(var_of(fwd) / fwd.size());
    const double se_g = batch_mean_se(gibbs, 100);
    const double se = std::sqrt(se_f * se_f + se_g * se_g);
    const double diff = std::abs(mean_of(fwd) - mean_of(gibbs));
    INFO(name << ": diff=" << diff << " se=" << se);
    CHECK(diff < 3.0 * se);
  };
  check_stat(f_ymean, g_ymean, "mean(y)");
  check_stat(f_theta1, g_theta1, "theta_{c_1}");
  check_stat(f_alpha, g_alpha, "alpha");
}

TEST_CASE("run_slice snapshots, determinism, and H growth bound") {
  SliceConfig cfg;
  Eigen::VectorXd y(30);
  Rng data_rng(21);
  for (int i = 0; i < 30; ++i) y[i] = draw_normal(data_rng);

  const ChainOutput out = run_slice(cfg, y, 10, 0, 555);
  CHECK(out.draws.size() == 10);
  CHECK(out.seconds >= 0.0);

  const ChainOutput again = run_slice(cfg, y, 10, 0, 555);
  for (int t = 0; t < 10; ++t) {
    CHECK(out.draws[t].alpha == again.draws[t].alpha);
    CHECK(out.draws[t].V == again.draws[t].V);
    CHECK(out.draws[t].theta == again.draws[t].theta);
  }

  CHECK_THROWS_AS(run_slice(cfg, y, 5, 5, 1), std::invalid_argument);

  // median H stays small at alpha <= 1, n <= 100
  const ChainOutput longer = run_slice(cfg, y, 2000, 0, 556);
  std::vector<int> hs;
  for (const auto& snap : longer.draws) hs.push_back(snap.H);
  std::nth_element(hs.begin(), hs.begin() + hs.size() / 2, hs.end());
  CHECK(hs[hs.size() / 2] < 50);
}

TEST_CASE("complete_to_truncation padding and merging") {
  SliceConfig cfg;
  Rng rng(33);

  SliceSnapshot snap;
  snap.V = {0.4, 0.3, 0.2};
  snap.theta = {1.0, -1.0, 0.5};
  snap.alpha = 1.0;
  snap.H = 3;

  SUBCASE("H equals K_out: no padding") {
    const TruncatedDraw td = complete_to_truncation(snap, 3, cfg, rng);
    CHECK(td.V.size() == 2);
    CHECK(td.theta.size() == 3);
    CHECK(td.V[0] == 0.4);
    CHECK(td.V[1] == 0.3);
    CHECK(td.theta[2] == 0.5);
  }

  SUBCASE("H smaller: prior padding preserves the head") {
    SliceSnapshot small;
    small.V = {0.7};
    small.theta = {2.0};
    small.alpha = 0.5;
    small.H = 1;
    const TruncatedDraw td = complete_to_truncation(small, 3, cfg, rng);
    CHECK(td.V[0] == 0.7);
    CHECK(td.theta[0] == 2.0);
    CHECK(td.V.size() == 2);
    CHECK(td.theta.size() == 3);
    for (Eigen::Index h = 0; h < td.V.size(); ++h) {
      CHECK(td.V[h] > 0.0);
      CHECK(td.V[h] < 1.0);
    }
  }

  SUBCASE("H larger: surplus mass merges into the remainder slot") {
    SliceSnapshot big;
    big.V = {0.3, 0.2, 0.1, 0.25, 0.4};
    big.theta = {1.0, 2.0, 3.0, 4.0, 5.0};
    big.alpha = 1.0;
    big.H = 5;
    const TruncatedDraw td = complete_to_truncation(big, 3, cfg, rng);
    CHECK(td.V.size() == 2);
    CHECK(td.V[0] == 0.3);
    CHECK(td.V[1] == 0.2);
    // heaviest truncated component: pi_3..pi_5 from the sticks
    const std::vector<double> pi = stick_pis(big.V);
    int best = 2;
    for (int h = 2; h < 5; ++h)
      if (pi[h] > pi[best]) best = h;
    CHECK(td.theta[2] == big.theta[best]);
  }

  SUBCASE("padded weights plus remainder telescope to one") {
    SliceSnapshot small;
    small.V = {0.6};
    small.theta = {0.0};
    small.alpha = 2.0;
    small.H = 1;
    const TruncatedDraw td = complete_to_truncation(small, 6, cfg, rng);
    double total = 0.0, rem = 1.0;
    for (Eigen::Index h = 0; h < td.V.size(); ++h) {
      total += td.V[h] * rem;
      rem *= 1.0 - td.V[h];
    }
    total += rem;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}
