#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dpmlap/rng.hpp"

namespace dpmlap {

struct GammaPrior {
  double shape = 3.0;
  double rate = 3.0;  // mean = shape / rate
};

struct SliceConfig {
  double sigma = 1.0;  // kernel sd
  double m0 = 0.0;     // base-measure mean
  double s0 = 1.0;     // base-measure sd
  GammaPrior alpha_prior;
  bool update_alpha = true;
  bool disable_likelihood = false;  // test seam: prior-reproduction runs
};

// Instantiated part of the infinite mixture. Labels are 0-based; V and
// theta hold H sticks/atoms, everything beyond H is prior-distributed.
struct SliceState {
  std::vector<int> c;         // n cluster labels in [0, H)
  Eigen::VectorXd u;          // n slice variables, u_i < pi_{c_i}
  std::vector<double> V;      // H sticks in (0,1)
  std::vector<double> theta;  // H atoms
  double alpha = 1.0;
  int H = 1;
};

struct SliceSnapshot {
  std::vector<double> V;
  std::vector<double> theta;
  double alpha = 1.0;
  int H = 1;
};

struct ChainOutput {
  std::vector<SliceSnapshot> draws;  // one per iteration
  int burn_in = 0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

// pi_h = V_h * prod_{l<h}(1 - V_l) for the instantiated sticks.
std::vector<double> stick_pis(const std::vector<double>& V);

SliceState init_slice_state(const SliceConfig& cfg, const Eigen::VectorXd& y, Rng& rng);

// One full conditional sweep: atoms, sticks, slices, extension,
// allocations, concentration update.
void slice_sweep(SliceState& st, const SliceConfig& cfg, const Eigen::VectorXd& y,
                 Rng& rng);

ChainOutput run_slice(const SliceConfig& cfg, const Eigen::VectorXd& y, int iters,
                      int burn_in, std::uint64_t seed);

// Fixed-size representation used by density evaluation: K_out - 1 sticks
// and K_out atoms, padded with prior draws or merged down when H > K_out.
struct TruncatedDraw {
  Eigen::VectorXd V;      // K_out - 1
  Eigen::VectorXd theta;  // K_out
};

TruncatedDraw complete_to_truncation(const SliceSnapshot& snap, int K_out,
                                     const SliceConfig& cfg, Rng& rng);

}  // namespace dpmlap
