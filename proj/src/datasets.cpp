#include "dpmlap/datasets.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpmlap {

namespace {

struct DatasetInfo {
  const char* canonical;
  const char* file;
  int expected_n;
};

const DatasetInfo* lookup(const std::string& name) {
  static const DatasetInfo table[] = {
      {"faithful-eruptions", "faithful_eruptions.csv", 272},
      {"galaxies", "galaxies.csv", 82},
      {"iris-petal-length", "iris_petal_length.csv", 150},
      {"rock-peri", "rock_peri.csv", 48},
  };
  for (const auto& info : table) {
    if (name == info.canonical) return &info;
  }
  if (name == "faithful") return &table[0];
  if (name == "iris") return &table[2];
  if (name == "rock") return &table[3];
  return nullptr;
}

}  // namespace

const std::string& default_data_dir() {
#ifdef DPMLAP_DATA_DIR
  static const std::string dir = DPMLAP_DATA_DIR;
#else
  static const std::string dir = "data";
#endif
  return dir;
}

RealDataset load_dataset(const std::string& name, const std::string& data_dir) {
  const DatasetInfo* info = lookup(name);
  if (!info) throw std::invalid_argument("unknown dataset: " + name);

  const std::string path = data_dir + "/" + info->file;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file " + path);
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(line, &pos);
    if (pos == 0) throw std::runtime_error("parse failure in " + path + ": " + line);
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != info->expected_n) {
    std::ostringstream msg;
    msg << path << " has " << values.size() << " rows, expected " << info->expected_n;
    throw std::runtime_error(msg.str());
  }

  RealDataset ds;
  ds.name = info->canonical;
  ds.n = info->expected_n;
  ds.raw = Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
  ds.raw_mean = ds.raw.mean();
  ds.raw_sd = std::sqrt((ds.raw.array() - ds.raw_mean).square().sum() / (ds.n - 1));
  ds.standardized = (ds.raw.array() - ds.raw_mean) / ds.raw_sd;
  return ds;
}

std::vector<std::string> dataset_short_names() {
  return {"faithful", "galaxies", "iris", "rock"};
}

}  // namespace dpmlap
