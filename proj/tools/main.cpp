#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dpmlap/harness.hpp"

namespace {

using dpmlap::ExperimentConfig;

struct CommonArgs {
  int scenario = 0;
  std::string dataset;
  int n = 100;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  std::vector<int> ns;
  int K = 0;
  int draws = 2000;
  int slice_iters = 10000;
  int burn_in = 2000;
  int grid_points = 400;
  int restarts = 0;
  int workers = 1;
  std::string out = "out";
  std::string config_file;
  std::vector<std::string> datasets;
};

void add_common_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--K", a.K, "truncation level (0 = default: 20 sim, 30 real)");
  cmd->add_option("--draws", a.draws, "approximate posterior draws per method");
  cmd->add_option("--slice-iters", a.slice_iters, "slice sampler iterations");
  cmd->add_option("--burn-in", a.burn_in, "slice burn-in iterations");
  cmd->add_option("--grid-points", a.grid_points, "density grid size");
  cmd->add_option("--restarts", a.restarts, "extra jittered Laplace starts");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--config", a.config_file, "JSON config file mirroring the flags");
}

// flags explicitly passed on the command line override the config file
void overlay_config(const CLI::App* cmd, CommonArgs& a) {
  if (a.config_file.empty()) return;
  std::ifstream in(a.config_file);
  if (!in) throw std::runtime_error("cannot open config file " + a.config_file);
  nlohmann::json j;
  in >> j;

  auto set_if_unset = [&](const char* flag, auto& target) {
    const std::string key = std::string(flag).substr(2);
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    const bool passed = opt != nullptr && opt->count() > 0;
    if (!passed && j.contains(key)) j.at(key).get_to(target);
  };
  set_if_unset("--scenario", a.scenario);
  set_if_unset("--dataset", a.dataset);
  set_if_unset("--datasets", a.datasets);
  set_if_unset("--n", a.n);
  set_if_unset("--ns", a.ns);
  set_if_unset("--seed", a.seed);
  set_if_unset("--seeds", a.seeds);
  set_if_unset("--K", a.K);
  set_if_unset("--draws", a.draws);
  set_if_unset("--slice-iters", a.slice_iters);
  set_if_unset("--burn-in", a.burn_in);
  set_if_unset("--grid-points", a.grid_points);
  set_if_unset("--restarts", a.restarts);
  set_if_unset("--workers", a.workers);
  set_if_unset("--out", a.out);
}

ExperimentConfig base_config(const CommonArgs& a) {
  ExperimentConfig cfg;
  cfg.scenario = a.scenario;
  cfg.dataset = a.dataset;
  cfg.n = a.n;
  cfg.seed = a.seed;
  cfg.K = a.K;
  cfg.draws_approx = a.draws;
  cfg.slice_iters = a.slice_iters;
  cfg.slice_burn_in = a.burn_in;
  cfg.grid_points = a.grid_points;
  cfg.restarts = a.restarts;
  return cfg;
}

void print_summary(const dpmlap::ExperimentReport& rep) {
  std::ostringstream os;
  os << rep.resolved.source_label << " seed=" << rep.config.seed
     << "  lap=" << rep.lap_seconds << "s skew=" << rep.skew_seconds
     << "s slice=" << rep.slice_seconds << "s";
  if (rep.lap_mean.size() > 0) {
    os << "  tv_slice(lap)=" << rep.lap_tv.tv_to_slice_mean
       << " tv_slice(skew)=" << rep.skew_tv.tv_to_slice_mean;
    if (rep.lap_tv.improvement_pct)
      os << " improvement=" << *rep.lap_tv.improvement_pct << "%";
  }
  std::cout << os.str() << std::endl;
}

int run_jobs(std::vector<ExperimentConfig> jobs, int workers) {
  if (jobs.empty()) throw std::invalid_argument("no experiments to run");
  std::atomic<std::size_t> next{0};
  std::mutex io;
  std::atomic<bool> failed{false};
  std::string first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size() || failed.load()) return;
      try {
        const dpmlap::ExperimentReport rep = dpmlap::run_experiment(jobs[idx]);
        std::lock_guard<std::mutex> lk(io);
        print_summary(rep);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(io);
        if (!failed.exchange(true)) first_error = e.what();
        std::cerr << "error: " << e.what() << std::endl;
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(workers, jobs.size()));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return failed.load() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace and skew-Laplace posterior approximation for DPM "
               "density estimation, with a slice-sampler benchmark"};
  app.require_subcommand(1);

  CommonArgs run_args, sim_args, real_args, bench_args;

  CLI::App* run = app.add_subcommand("run", "one experiment on a scenario or dataset");
  run->add_option("--scenario", run_args.scenario, "simulation scenario 1..4");
  run->add_option("--dataset", run_args.dataset,
                  "real dataset: faithful | galaxies | iris | rock");
  run->add_option("--n", run_args.n, "simulated sample size");
  run->add_option("--seed", run_args.seed, "root seed");
  add_common_flags(run, run_args);

  CLI::App* sim = app.add_subcommand("simulate", "scenario sweep over sample sizes");
  sim->add_option("--scenario", sim_args.scenario, "simulation scenario 1..4")
      ->required();
  sim->add_option("--ns", sim_args.ns, "sample sizes (default 20..2000 sweep)");
  sim->add_option("--seeds", sim_args.seeds, "root seeds, one experiment each");
  sim->add_option("--workers", sim_args.workers, "concurrent experiments");
  add_common_flags(sim, sim_args);

  CLI::App* real = app.add_subcommand("real", "real-data benchmark runs");
  real->add_option("--datasets", real_args.datasets,
                   "subset of: faithful galaxies iris rock");
  real->add_option("--seeds", real_args.seeds, "root seeds, one experiment each");
  real->add_option("--workers", real_args.workers, "concurrent experiments");
  add_common_flags(real, real_args);

  CLI::App* bench = app.add_subcommand("bench", "timing-only scenario runs");
  bench->add_option("--scenario", bench_args.scenario, "simulation scenario 1..4")
      ->required();
  bench->add_option("--ns", bench_args.ns, "sample sizes");
  bench->add_option("--seed", bench_args.seed, "root seed");
  add_common_flags(bench, bench_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      overlay_config(run, run_args);
      ExperimentConfig cfg = base_config(run_args);
      cfg.out_dir = run_args.out;
      const dpmlap::ExperimentReport rep = dpmlap::run_experiment(cfg);
      print_summary(rep);
      for (const std::string& p : rep.artifacts) std::cout << p << "\n";
      return 0;
    }

    if (sim->parsed()) {
      overlay_config(sim, sim_args);
      if (sim_args.ns.empty())
        sim_args.ns = {20, 50, 100, 200, 500, 1000, 1500, 2000};
      return run_jobs(dpmlap::scenario_sweep(base_config(sim_args), sim_args.ns,
                                             sim_args.seeds, sim_args.out),
                      sim_args.workers);
    }

    if (real->parsed()) {
      overlay_config(real, real_args);
      if (real_args.datasets.empty()) real_args.datasets = dpmlap::dataset_short_names();
      return run_jobs(dpmlap::real_sweep(base_config(real_args), real_args.datasets,
                                         real_args.seeds, real_args.out),
                      real_args.workers);
    }

    if (bench->parsed()) {
      overlay_config(bench, bench_args);
      if (bench_args.ns.empty())
        bench_args.ns = {20, 50, 100, 200, 500, 1000, 1500, 2000};
      std::vector<ExperimentConfig> jobs;
      for (int n : bench_args.ns) {
        ExperimentConfig cfg = base_config(bench_args);
        cfg.n = n;
        cfg.compute_metrics = false;
        cfg.out_dir = bench_args.out + "/bench_scenario" +
                      std::to_string(cfg.scenario) + "_n" + std::to_string(n);
        jobs.push_back(cfg);
      }
      return run_jobs(std::move(jobs), 1);
    }
  } catch (const dpmlap::StageError& e) {
    std::cerr << "error " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
