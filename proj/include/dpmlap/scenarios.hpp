#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "dpmlap/rng.hpp"

namespace dpmlap {

// 1: four Gaussian components, stick-type weights
// 2: 100 Gaussian components, Zipf weights
// 3/4: same structures with shifted Student-t(5) kernels
struct ScenarioSpec {
  int id = 1;
  int n = 100;
  std::uint64_t seed = 1;
};

struct Scenario {
  int id = 0;
  Eigen::VectorXd weights;
  Eigen::VectorXd locations;
  bool student_t = false;

  double density(double x) const;
};

// Normalized cumulative products of the raw sticks.
Eigen::VectorXd scenario1_weights_from_sticks(const Eigen::VectorXd& V);

// Draws the scenario's random weights/locations from rng.
Scenario realize_scenario(int id, Rng& rng);

struct GeneratedData {
  Eigen::VectorXd y;
  Scenario truth;
};

GeneratedData generate(const ScenarioSpec& spec);

// data CSV plus a sidecar JSON carrying (weights, locations, id, seed)
void write_scenario_csv(const GeneratedData& data, std::uint64_t seed,
                        const std::string& csv_path, const std::string& json_path);

double student_t_pdf(double x, double nu);

}  // namespace dpmlap
