#pragma once

#include <string>
#include <vector>

#include "enetlts/data.hpp"

namespace enetlts {

/// Numeric CSV: comma separated, one header row, '.' decimal point.
struct CsvTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows x columns
};

CsvTable read_numeric_csv(const std::string& path);

void write_numeric_csv(const std::string& path,
                       const std::vector<std::string>& columns,
                       const Eigen::MatrixXd& values);

struct LoadedDataset {
  Dataset data;
  std::vector<std::string> feature_names;
  std::string response_name;
};

/// Split a CSV into response column + predictors and validate the dataset.
LoadedDataset load_dataset_csv(const std::string& path,
                               const std::string& response, Family family);

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& feature_names,
                       const std::string& response_name);

/// Round-trip-exact formatting of a double ("%.17g").
std::string format_double(double v);

}  // namespace enetlts
