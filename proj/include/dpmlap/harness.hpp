#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpmlap/datasets.hpp"
#include "dpmlap/density.hpp"
#include "dpmlap/laplace.hpp"
#include "dpmlap/metrics.hpp"
#include "dpmlap/scenarios.hpp"
#include "dpmlap/slice.hpp"

namespace dpmlap {

// Failure in one pipeline stage; the stage tag surfaces in the CLI exit path.
struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string stage_, const std::string& msg)
      : std::runtime_error("[" + stage_ + "] " + msg), stage(std::move(stage_)) {}
};

struct ExperimentConfig {
  int scenario = 0;     // 1..4, or 0 when a dataset is given
  std::string dataset;  // faithful | galaxies | iris | rock, empty for scenarios
  int n = 100;          // simulated sample size
  std::uint64_t seed = 1;
  int K = 0;  // 0 -> 20 simulated / 30 real
  int draws_approx = 2000;
  int slice_iters = 10000;
  int slice_burn_in = 2000;
  int grid_points = 400;
  double pad_sd = 4.0;  // grid padding in kernel sds; real data uses the data range
  int restarts = 0;     // extra Laplace starts
  bool compute_metrics = true;
  std::string out_dir;  // empty -> no artifacts written

  bool is_real() const { return !dataset.empty(); }
  void validate() const;
};

// Fully pinned-down model and protocol for one run.
struct ResolvedConfig {
  std::string source_label;
  int n = 0;
  ModelConfig model;  // alpha fixed at the prior mean
  GammaPrior alpha_prior;
  double grid_pad = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  ResolvedConfig resolved;

  double lap_seconds = 0.0;   // mode + covariance + Gaussian draws
  double skew_seconds = 0.0;  // proposals + weight evaluations
  double slice_seconds = 0.0;

  TVReport lap_tv, skew_tv;
  std::optional<double> slice_tv_to_truth;

  Eigen::VectorXd grid;
  std::optional<Eigen::VectorXd> truth_density;
  Eigen::VectorXd lap_mean, skew_mean, slice_mean;

  double fit_jitter = 0.0;
  int opt_iters = 0;
  double grad_norm_at_mode = 0.0;
  double skew_kept_fraction = 0.0;

  std::vector<std::string> artifacts;
};

ResolvedConfig resolve_config(const ExperimentConfig& cfg, int n_real = 0);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Batch construction; each job gets its own output subdirectory.
std::vector<ExperimentConfig> scenario_sweep(const ExperimentConfig& base,
                                             const std::vector<int>& ns,
                                             const std::vector<std::uint64_t>& seeds,
                                             const std::string& out_root);
std::vector<ExperimentConfig> real_sweep(const ExperimentConfig& base,
                                         const std::vector<std::string>& datasets,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::string& out_root);

// Emits summary.csv, pointwise_tv.csv, density_mean.csv and report.json
// (report.json carries no timings so equal-seed runs are byte-identical).
std::vector<std::string> write_report(const ExperimentReport& rep,
                                      const std::string& out_dir);

}  // namespace dpmlap
