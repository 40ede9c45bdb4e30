#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dpmlap {

struct RealDataset {
  std::string name;  // canonical: faithful-eruptions, galaxies, iris-petal-length, rock-peri
  Eigen::VectorXd raw;
  Eigen::VectorXd standardized;  // mean 0, sample sd 1
  int n = 0;
  double raw_mean = 0.0;
  double raw_sd = 0.0;
};

// Directory the CSVs were vendored into at configure time.
const std::string& default_data_dir();

// Accepts short aliases (faithful, galaxies, iris, rock) or canonical names;
// validates the row count against the published sample size.
RealDataset load_dataset(const std::string& name,
                         const std::string& data_dir = default_data_dir());

std::vector<std::string> dataset_short_names();

}  // namespace dpmlap
