#include "dpmlap/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpmlap {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

double gaussian_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

int draw_categorical(const Eigen::VectorXd& w, Rng& rng) {
  double u = draw_uniform(rng);
  for (Eigen::Index h = 0; h < w.size(); ++h) {
    u -= w[h];
    if (u <= 0.0) return static_cast<int>(h);
  }
  return static_cast<int>(w.size() - 1);
}

}  // namespace

double student_t_pdf(double x, double nu) {
  const double lognorm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * M_PI);
  return std::exp(lognorm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double Scenario::density(double x) const {
  double f = 0.0;
  for (Eigen::Index h = 0; h < weights.size(); ++h) {
    const double d = x - locations[h];
    f += weights[h] * (student_t ? student_t_pdf(d, 5.0) : gaussian_pdf(d));
  }
  return f;
}

Eigen::VectorXd scenario1_weights_from_sticks(const Eigen::VectorXd& V) {
  Eigen::VectorXd cum(V.size());
  double prod = 1.0;
  for (Eigen::Index h = 0; h < V.size(); ++h) {
    prod *= V[h];
    cum[h] = prod;
  }
  return cum / cum.sum();
}

Scenario realize_scenario(int id, Rng& rng) {
  Scenario sc;
  sc.id = id;
  sc.student_t = (id == 3 || id == 4);
  if (id == 1 || id == 3) {
    Eigen::VectorXd V(4);
    for (int h = 0; h < 4; ++h) V[h] = draw_beta(rng, 1.0, 2.0);
    sc.weights = scenario1_weights_from_sticks(V);
    sc.locations.resize(4);
    sc.locations << -3.0, 0.0, 1.5, 3.0;
  } else if (id == 2 || id == 4) {
    const int m = 100;
    sc.weights.resize(m);
    for (int h = 0; h < m; ++h) sc.weights[h] = 1.0 / ((h + 1.0) * (h + 1.0));
    sc.weights /= sc.weights.sum();
    sc.locations.resize(m);
    for (int h = 0; h < m; ++h) sc.locations[h] = 1.5 * draw_normal(rng);
  } else {
    throw std::invalid_argument("scenario id must be in 1..4");
  }
  return sc;
}

GeneratedData generate(const ScenarioSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("n must be >= 1");
  Rng rng(spec.seed);
  GeneratedData out;
  out.truth = realize_scenario(spec.id, rng);
  out.y.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const int h = draw_categorical(out.truth.weights, rng);
    const double noise =
        out.truth.student_t ? draw_student_t(rng, 5.0) : draw_normal(rng);
    out.y[i] = out.truth.locations[h] + noise;
  }
  return out;
}

void write_scenario_csv(const GeneratedData& data, std::uint64_t seed,
                        const std::string& csv_path, const std::string& json_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  csv << std::setprecision(17) << "y\n";
  for (Eigen::Index i = 0; i < data.y.size(); ++i) csv << data.y[i] << "\n";
  if (!csv) throw std::runtime_error("write failed: " + csv_path);

  nlohmann::json meta;
  meta["id"] = data.truth.id;
  meta["seed"] = seed;
  meta["weights"] = std::vector<double>(data.truth.weights.begin(),
                                        data.truth.weights.end());
  meta["locations"] = std::vector<double>(data.truth.locations.begin(),
                                          data.truth.locations.end());
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot open " + json_path);
  js << meta.dump(2) << "\n";
  if (!js) throw std::runtime_error("write failed: " + json_path);
}

}  // namespace dpmlap
