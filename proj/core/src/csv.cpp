#include "enetlts/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "enetlts/errors.hpp"

namespace enetlts {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& raw, const std::string& path, int row,
                    const std::string& column) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ValidationError(path + ": row " + std::to_string(row) + ", column '" +
                          column + "': cannot parse '" + s + "' as a number");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvTable read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError(path + ": empty file, expected a header row");
  }
  CsvTable table;
  for (const auto& name : split_line(line)) {
    table.columns.push_back(trim(name));
  }
  const std::size_t ncol = table.columns.size();
  if (ncol == 0) throw ValidationError(path + ": header row has no columns");
  std::vector<double> values;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != ncol) {
      throw ValidationError(path + ": row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(ncol));
    }
    for (std::size_t j = 0; j < ncol; ++j) {
      values.push_back(parse_double(fields[j], path, row, table.columns[j]));
    }
  }
  const auto nrow = static_cast<Eigen::Index>(values.size() / ncol);
  table.values.resize(nrow, static_cast<Eigen::Index>(ncol));
  for (Eigen::Index i = 0; i < nrow; ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(ncol); ++j) {
      table.values(i, j) = values[static_cast<std::size_t>(i) * ncol +
                                  static_cast<std::size_t>(j)];
    }
  }
  return table;
}

void write_numeric_csv(const std::string& path,
                       const std::vector<std::string>& columns,
                       const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out << (j == 0 ? "" : ",") << columns[j];
  }
  out << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out << (j == 0 ? "" : ",") << format_double(values(i, j));
    }
    out << "\n";
  }
  if (!out) throw Error("failed writing '" + path + "'");
}

LoadedDataset load_dataset_csv(const std::string& path,
                               const std::string& response, Family family) {
  const CsvTable table = read_numeric_csv(path);
  const auto it = std::find(table.columns.begin(), table.columns.end(), response);
  if (it == table.columns.end()) {
    throw ValidationError(path + ": response column '" + response +
                          "' not found in header");
  }
  const auto yc = static_cast<Eigen::Index>(it - table.columns.begin());
  LoadedDataset out;
  out.response_name = response;
  out.data.family = family;
  out.data.y = table.values.col(yc);
  out.data.X.resize(table.values.rows(), table.values.cols() - 1);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    if (j == yc) continue;
    out.data.X.col(k) = table.values.col(j);
    out.feature_names.push_back(table.columns[static_cast<std::size_t>(j)]);
    ++k;
  }
  validate(out.data);
  return out;
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& feature_names,
                       const std::string& response_name) {
  if (static_cast<int>(feature_names.size()) != data.p()) {
    throw ValidationError("write_dataset_csv: feature name count mismatch");
  }
  std::vector<std::string> columns = feature_names;
  columns.push_back(response_name);
  Eigen::MatrixXd values(data.n(), data.p() + 1);
  values.leftCols(data.p()) = data.X;
  values.col(data.p()) = data.y;
  write_numeric_csv(path, columns, values);
}

}  // namespace enetlts
