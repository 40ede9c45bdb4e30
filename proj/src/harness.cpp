#include "dpmlap/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpmlap/skew.hpp"

namespace dpmlap {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string opt_fmt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

void ExperimentConfig::validate() const {
  const bool has_scenario = scenario >= 1 && scenario <= 4;
  if (scenario != 0 && !has_scenario)
    throw std::invalid_argument("scenario must be in 1..4");
  if (has_scenario == is_real())
    throw std::invalid_argument("pick exactly one of scenario or dataset");
  if (!is_real() && n < 1) throw std::invalid_argument("n must be >= 1");
  if (K < 0 || K == 1) throw std::invalid_argument("K must be 0 (default) or >= 2");
  if (draws_approx < 1) throw std::invalid_argument("draws must be >= 1");
  if (slice_iters <= slice_burn_in || slice_burn_in < 0)
    throw std::invalid_argument("need slice_iters > burn_in >= 0");
  if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
  if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");
}

ResolvedConfig resolve_config(const ExperimentConfig& cfg, int n_real) {
  ResolvedConfig rc;
  if (cfg.is_real()) {
    rc.source_label = cfg.dataset;
    rc.n = n_real;
    rc.model.K = cfg.K ? cfg.K : 30;
    rc.model.sigma = 0.5;
    rc.model.m0 = 0.0;
    rc.model.s0 = 0.5;
    rc.alpha_prior = {3.0, 3.0};
    rc.model.alpha = rc.alpha_prior.shape / rc.alpha_prior.rate;  // 1
    rc.grid_pad = 0.0;  // grid covers the observed range only
  } else {
    rc.source_label = "scenario" + std::to_string(cfg.scenario) + "_n" +
                      std::to_string(cfg.n);
    rc.n = cfg.n;
    rc.model.K = cfg.K ? cfg.K : 20;
    rc.model.sigma = 1.0;
    rc.model.m0 = 0.0;
    rc.model.s0 = 1.0;
    const double logn = std::log(static_cast<double>(cfg.n));
    rc.alpha_prior = {3.0, 3.0 * logn};
    rc.model.alpha = 1.0 / logn;
    rc.grid_pad = cfg.pad_sd * rc.model.sigma;
  }
  rc.model.validate();
  return rc;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.config = cfg;

  // data
  Eigen::VectorXd y;
  std::optional<Scenario> truth;
  try {
    if (cfg.is_real()) {
      const RealDataset ds = load_dataset(cfg.dataset);
      y = ds.standardized;
      rep.resolved = resolve_config(cfg, ds.n);
    } else {
      ScenarioSpec spec{cfg.scenario, cfg.n, derive_seed(cfg.seed, "data")};
      GeneratedData gen = generate(spec);
      y = gen.y;
      truth = std::move(gen.truth);
      rep.resolved = resolve_config(cfg);
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("data", e.what());
  }

  const ModelConfig& model = rep.resolved.model;
  const Grid grid = make_grid(y, cfg.grid_points, rep.resolved.grid_pad);
  rep.grid = grid.points;

  // Laplace: mode + covariance + Gaussian draws, timed as one stage
  LaplaceFit fit;
  Eigen::MatrixXd lap_draws;
  try {
    const auto t0 = Clock::now();
    ModeOptions mopts;
    mopts.restarts = cfg.restarts;
    mopts.restart_seed = derive_seed(cfg.seed, "lap");
    const ModeResult mode = find_mode(model, y, default_init(model, y), mopts);
    if (!mode.converged) {
      std::ostringstream msg;
      msg << "mode finding did not reach tolerance (grad sup-norm "
          << mode.grad_sup_norm << " after " << mode.iters << " iterations)";
      throw std::runtime_error(msg.str());
    }
    fit = gaussian_from_hessian(model, mode, y);
    lap_draws = sample_gaussian(fit, cfg.draws_approx, derive_seed(cfg.seed, "lap"));
    rep.lap_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    throw StageError("lap", e.what());
  }
  rep.fit_jitter = fit.jitter;
  rep.opt_iters = fit.opt_iters;
  rep.grad_norm_at_mode = fit.grad_norm_at_mode;

  // skew-Laplace draws reusing the fit
  Eigen::MatrixXd skew_draws;
  try {
    const auto t0 = Clock::now();
    const SkewWeightContext ctx = make_skew_context(model, fit, y);
    SkewSample ss =
        sample_skew_laplace(ctx, cfg.draws_approx, derive_seed(cfg.seed, "skew"));
    skew_draws = std::move(ss.draws);
    rep.skew_kept_fraction = static_cast<double>(ss.kept) / cfg.draws_approx;
    rep.skew_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    throw StageError("skew", e.what());
  }

  // slice benchmark
  ChainOutput chain;
  SliceConfig slice_cfg;
  slice_cfg.sigma = model.sigma;
  slice_cfg.m0 = model.m0;
  slice_cfg.s0 = model.s0;
  slice_cfg.alpha_prior = rep.resolved.alpha_prior;
  try {
    chain = run_slice(slice_cfg, y, cfg.slice_iters, cfg.slice_burn_in,
                      derive_seed(cfg.seed, "slice"));
    rep.slice_seconds = chain.seconds;
  } catch (const std::exception& e) {
    throw StageError("slice", e.what());
  }

  if (!cfg.compute_metrics) {
    if (!cfg.out_dir.empty()) rep.artifacts = write_report(rep, cfg.out_dir);
    return rep;
  }

  // density ensembles on the shared grid
  DensityEnsemble lap_ens, skew_ens, slice_ens;
  try {
    lap_ens = ensemble_from_unconstrained(model, lap_draws, grid, "lap");
    skew_ens = ensemble_from_unconstrained(model, skew_draws, grid, "skew");

    const int kept = cfg.slice_iters - cfg.slice_burn_in;
    slice_ens.grid = grid;
    slice_ens.method_tag = "slice";
    slice_ens.ords.resize(kept, grid.points.size());
    Rng pad_rng(derive_seed(cfg.seed, "slice-pad"));
    Eigen::VectorXd pi(model.K);
    for (int t = 0; t < kept; ++t) {
      const SliceSnapshot& snap = chain.draws[cfg.slice_burn_in + t];
      const TruncatedDraw td =
          complete_to_truncation(snap, model.K, slice_cfg, pad_rng);
      double rem = 1.0;
      for (int h = 0; h < model.K - 1; ++h) {
        pi[h] = td.V[h] * rem;
        rem *= 1.0 - td.V[h];
      }
      pi[model.K - 1] = rem;
      slice_ens.ords.row(t) = ordinates(model.sigma, pi, td.theta, grid).transpose();
    }
  } catch (const std::exception& e) {
    throw StageError("density", e.what());
  }

  // metrics
  try {
    std::optional<Eigen::VectorXd> truth_grid;
    if (truth) {
      Eigen::VectorXd f(grid.points.size());
      for (Eigen::Index r = 0; r < grid.points.size(); ++r)
        f[r] = truth->density(grid.points[r]);
      truth_grid = std::move(f);
      rep.truth_density = truth_grid;
    }
    const ReportPair pair = assemble_report(truth_grid, lap_ens, skew_ens, slice_ens);
    rep.lap_tv = pair.lap;
    rep.skew_tv = pair.skew;
    rep.lap_mean = posterior_mean_density(lap_ens);
    rep.skew_mean = posterior_mean_density(skew_ens);
    rep.slice_mean = posterior_mean_density(slice_ens);
    if (truth_grid)
      rep.slice_tv_to_truth = grid_tv(rep.slice_mean, *truth_grid, grid.dx);
  } catch (const std::exception& e) {
    throw StageError("metrics", e.what());
  }

  if (!cfg.out_dir.empty()) rep.artifacts = write_report(rep, cfg.out_dir);
  return rep;
}

std::vector<ExperimentConfig> scenario_sweep(const ExperimentConfig& base,
                                             const std::vector<int>& ns,
                                             const std::vector<std::uint64_t>& seeds,
                                             const std::string& out_root) {
  if (seeds.empty()) throw std::invalid_argument("seed list must not be empty");
  if (ns.empty()) throw std::invalid_argument("sample-size list must not be empty");
  std::vector<ExperimentConfig> jobs;
  for (int n : ns) {
    for (std::uint64_t s : seeds) {
      ExperimentConfig cfg = base;
      cfg.dataset.clear();
      cfg.n = n;
      cfg.seed = s;
      cfg.out_dir = out_root + "/scenario" + std::to_string(cfg.scenario) + "_n" +
                    std::to_string(n) + "_seed" + std::to_string(s);
      cfg.validate();
      jobs.push_back(std::move(cfg));
    }
  }
  return jobs;
}

std::vector<ExperimentConfig> real_sweep(const ExperimentConfig& base,
                                         const std::vector<std::string>& datasets,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::string& out_root) {
  if (seeds.empty()) throw std::invalid_argument("seed list must not be empty");
  if (datasets.empty()) throw std::invalid_argument("dataset list must not be empty");
  std::vector<ExperimentConfig> jobs;
  for (const std::string& ds : datasets) {
    for (std::uint64_t s : seeds) {
      ExperimentConfig cfg = base;
      cfg.scenario = 0;
      cfg.dataset = ds;
      cfg.seed = s;
      cfg.out_dir = out_root + "/" + ds + "_seed" + std::to_string(s);
      cfg.validate();
      jobs.push_back(std::move(cfg));
    }
  }
  return jobs;
}

std::vector<std::string> write_report(const ExperimentReport& rep,
                                      const std::string& out_dir) {
  std::vector<std::string> paths;
  try {
    fs::create_directories(out_dir);
    const bool have_metrics = rep.lap_mean.size() > 0;

    {
      const std::string p = out_dir + "/summary.csv";
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot open " + p);
      out << "dataset,n,K,seed,method,time_sec,tv_truth,tv_slice_mean\n";
      const std::string prefix = rep.resolved.source_label + "," +
                                 std::to_string(rep.resolved.n) + "," +
                                 std::to_string(rep.resolved.model.K) + "," +
                                 std::to_string(rep.config.seed) + ",";
      out << prefix << "lap," << fmt(rep.lap_seconds) << ","
          << opt_fmt(rep.lap_tv.tv_to_truth) << ","
          << (have_metrics ? fmt(rep.lap_tv.tv_to_slice_mean) : std::string()) << "\n";
      out << prefix << "skew," << fmt(rep.skew_seconds) << ","
          << opt_fmt(rep.skew_tv.tv_to_truth) << ","
          << (have_metrics ? fmt(rep.skew_tv.tv_to_slice_mean) : std::string())
          << "\n";
      out << prefix << "slice," << fmt(rep.slice_seconds) << ","
          << opt_fmt(rep.slice_tv_to_truth) << ",\n";
      if (!out) throw std::runtime_error("write failed: " + p);
      paths.push_back(p);
    }

    if (have_metrics) {
      const std::string p = out_dir + "/pointwise_tv.csv";
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot open " + p);
      out << "grid,lap,skew\n";
      for (Eigen::Index r = 0; r < rep.grid.size(); ++r)
        out << fmt(rep.grid[r]) << "," << fmt(rep.lap_tv.pointwise_tv[r]) << ","
            << fmt(rep.skew_tv.pointwise_tv[r]) << "\n";
      if (!out) throw std::runtime_error("write failed: " + p);
      paths.push_back(p);
    }

    if (have_metrics) {
      const std::string p = out_dir + "/density_mean.csv";
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot open " + p);
      out << (rep.truth_density ? "grid,truth,lap,skew,slice\n"
                                : "grid,lap,skew,slice\n");
      for (Eigen::Index r = 0; r < rep.grid.size(); ++r) {
        out << fmt(rep.grid[r]) << ",";
        if (rep.truth_density) out << fmt((*rep.truth_density)[r]) << ",";
        out << fmt(rep.lap_mean[r]) << "," << fmt(rep.skew_mean[r]) << ","
            << fmt(rep.slice_mean[r]) << "\n";
      }
      if (!out) throw std::runtime_error("write failed: " + p);
      paths.push_back(p);
    }

    {
      // no timings here: equal-seed runs must produce identical bytes
      nlohmann::json j;
      j["source"] = rep.resolved.source_label;
      j["n"] = rep.resolved.n;
      j["seed"] = rep.config.seed;
      j["model"] = {{"K", rep.resolved.model.K},
                    {"alpha", rep.resolved.model.alpha},
                    {"sigma", rep.resolved.model.sigma},
                    {"m0", rep.resolved.model.m0},
                    {"s0", rep.resolved.model.s0}};
      j["alpha_prior"] = {{"shape", rep.resolved.alpha_prior.shape},
                          {"rate", rep.resolved.alpha_prior.rate}};
      j["protocol"] = {{"draws_approx", rep.config.draws_approx},
                       {"slice_iters", rep.config.slice_iters},
                       {"slice_burn_in", rep.config.slice_burn_in},
                       {"grid_points", rep.config.grid_points},
                       {"grid_pad", rep.resolved.grid_pad},
                       {"restarts", rep.config.restarts}};
      j["diagnostics"] = {{"fit_jitter", rep.fit_jitter},
                          {"opt_iters", rep.opt_iters},
                          {"grad_norm_at_mode", rep.grad_norm_at_mode},
                          {"skew_kept_fraction", rep.skew_kept_fraction}};
      if (rep.lap_mean.size() > 0) {
        auto tv_json = [](const TVReport& tv) {
          nlohmann::json t;
          t["tv_to_slice_mean"] = tv.tv_to_slice_mean;
          if (tv.tv_to_truth) t["tv_to_truth"] = *tv.tv_to_truth;
          if (tv.improvement_pct) t["improvement_pct"] = *tv.improvement_pct;
          t["pointwise_tv"] = std::vector<double>(tv.pointwise_tv.begin(),
                                                  tv.pointwise_tv.end());
          return t;
        };
        j["metrics"]["lap"] = tv_json(rep.lap_tv);
        j["metrics"]["skew"] = tv_json(rep.skew_tv);
        if (rep.slice_tv_to_truth)
          j["metrics"]["slice"] = {{"tv_to_truth", *rep.slice_tv_to_truth}};
        j["grid"] = to_std(rep.grid);
      }
      const std::string p = out_dir + "/report.json";
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot open " + p);
      out << j.dump(2) << "\n";
      if (!out) throw std::runtime_error("write failed: " + p);
      paths.push_back(p);
    }
  } catch (const std::exception& e) {
    for (const std::string& p : paths) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw StageError("write", e.what());
  }
  return paths;
}

}  // namespace dpmlap
