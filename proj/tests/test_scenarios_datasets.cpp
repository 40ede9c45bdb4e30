#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dpmlap/datasets.hpp"
#include "dpmlap/scenarios.hpp"
#include "test_util.hpp"

using namespace dpmlap;

TEST_CASE("scenario 2 leading weight matches the partial-sum value") {
  Rng rng(1);
  const Scenario sc = realize_scenario(2, rng);
  REQUIRE(sc.weights.size() == 100);
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) s += 1.0 / (static_cast<double>(j) * j);
  CHECK(sc.weights[0] == doctest::Approx(1.0 / s).epsilon(1e-12));
  CHECK(sc.weights[0] == doctest::Approx(0.611626817785126).epsilon(1e-5 / 0.61));
}

TEST_CASE("scenario 1 weight construction from forced sticks") {
  const Eigen::VectorXd V = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd p = scenario1_weights_from_sticks(V);
  for (int h = 0; h < 4; ++h) CHECK(p[h] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("weights sum to one and are nonnegative in all scenarios") {
  for (int id = 1; id <= 4; ++id) {
    Rng rng(100 + id);
    const Scenario sc = realize_scenario(id, rng);
    CHECK(std::abs(sc.weights.sum() - 1.0) < 1e-12);
    CHECK(sc.weights.minCoeff() >= 0.0);
    CHECK(sc.weights.size() == ((id == 1 || id == 3) ? 4 : 100));
  }
}

TEST_CASE("generation is deterministic per seed") {
  const ScenarioSpec spec{3, 40, 987};
  const GeneratedData a = generate(spec);
  const GeneratedData b = generate(spec);
  CHECK(a.y == b.y);
  CHECK(a.truth.weights == b.truth.weights);
  CHECK(a.truth.locations == b.truth.locations);
  CHECK_THROWS_AS(generate({5, 10, 1}), std::invalid_argument);
}

TEST_CASE("true density integrates to one") {
  for (int id = 1; id <= 4; ++id) {
    Rng rng(50 + id);
    const Scenario sc = realize_scenario(id, rng);
    const double span = (id <= 2) ? 12.0 : 60.0;
    const int m = (id <= 2) ? 24001 : 120001;
    const double dx = 2.0 * span / (m - 1);
    double total = 0.0;
    for (int r = 0; r < m; ++r) total += sc.density(-span + r * dx) * dx;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("student t density value at the center") {
  CHECK(student_t_pdf(0.0, 5.0) == doctest::Approx(0.37960668982249435).epsilon(1e-5 / 0.38));
  // single-component degenerate spec collapses to the kernel
  Scenario sc;
  sc.id = 3;
  sc.student_t = true;
  sc.weights = Eigen::VectorXd::Ones(1);
  sc.locations = Eigen::VectorXd::Constant(1, -3.0);
  CHECK(sc.density(-3.0) == doctest::Approx(0.37960668982249435).epsilon(1e-5));
}

TEST_CASE("sample mean converges to the mixture mean") {
  for (int id : {1, 2}) {
    const ScenarioSpec spec{id, 100000, 4242};
    const GeneratedData gen = generate(spec);
    const double target = gen.truth.weights.dot(gen.truth.locations);
    double second = 0.0;
    for (Eigen::Index h = 0; h < gen.truth.weights.size(); ++h)
      second += gen.truth.weights[h] *
                (1.0 + gen.truth.locations[h] * gen.truth.locations[h]);
    const double sd = std::sqrt(second - target * target);
    CHECK(std::abs(gen.y.mean() - target) < 4.0 * sd / std::sqrt(100000.0));
  }
}

TEST_CASE("heavy-tail kernels stay near gaussian shape in the center") {
  Rng rng(9);
  const Scenario g = realize_scenario(1, rng);
  Scenario t = g;
  t.id = 3;
  t.student_t = true;
  Eigen::Index heaviest = 0;
  g.weights.maxCoeff(&heaviest);
  const double x = g.locations[heaviest];
  CHECK(std::abs(g.density(x) - t.density(x)) < 0.02);
}

TEST_CASE("scenario export round trip") {
  namespace fs = std::filesystem;
  const ScenarioSpec spec{1, 25, 31};
  const GeneratedData gen = generate(spec);
  const std::string csv = (fs::temp_directory_path() / "dpmlap_scn.csv").string();
  const std::string js = (fs::temp_directory_path() / "dpmlap_scn.json").string();
  write_scenario_csv(gen, spec.seed, csv, js);

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "y");
  int rows = 0;
  double first = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    if (rows == 0) first = std::stod(line);
    ++rows;
  }
  CHECK(rows == 25);
  CHECK(first == gen.y[0]);
  std::remove(csv.c_str());
  std::remove(js.c_str());
}

TEST_CASE("all four datasets load with the published sizes") {
  const RealDataset faithful = load_dataset("faithful");
  CHECK(faithful.n == 272);
  CHECK(faithful.name == "faithful-eruptions");
  const RealDataset galaxies = load_dataset("galaxies");
  CHECK(galaxies.n == 82);
  const RealDataset iris = load_dataset("iris");
  CHECK(iris.n == 150);
  const RealDataset rock = load_dataset("rock");
  CHECK(rock.n == 48);
}

TEST_CASE("standardization is exact and invertible") {
  for (const std::string& name : dataset_short_names()) {
    const RealDataset ds = load_dataset(name);
    CHECK(std::abs(ds.standardized.mean()) < 1e-10);
    const double sd = std::sqrt(
        (ds.standardized.array() - ds.standardized.mean()).square().sum() /
        (ds.n - 1));
    CHECK(std::abs(sd - 1.0) < 1e-10);
    const Eigen::VectorXd back =
        (ds.standardized.array() * ds.raw_sd + ds.raw_mean).matrix();
    CHECK((back - ds.raw).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("loading twice is identical") {
  const RealDataset a = load_dataset("galaxies");
  const RealDataset b = load_dataset("galaxies");
  CHECK(a.raw == b.raw);
  CHECK(a.standardized == b.standardized);
}

TEST_CASE("loader failure modes") {
  CHECK_THROWS_AS(load_dataset("unknown"), std::invalid_argument);
  CHECK_THROWS_AS(load_dataset("galaxies", "/nonexistent/dir"), std::runtime_error);

  // wrong row count
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dpmlap_bad_data";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "galaxies.csv");
    out << "velocity\n1\n2\n3\n";
  }
  CHECK_THROWS_AS(load_dataset("galaxies", dir.string()), std::runtime_error);
  fs::remove_all(dir);
}
