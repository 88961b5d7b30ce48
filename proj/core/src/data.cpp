#include "enetlts/data.hpp"

#include <cmath>

#include "enetlts/errors.hpp"
#include "enetlts/stats.hpp"

namespace enetlts {

int Dataset::count_class(int label) const {
  int c = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (static_cast<int>(y[i]) == label) ++c;
  }
  return c;
}

void validate(const Dataset& data) {
  if (data.X.rows() != data.y.size()) {
    throw ValidationError("dataset: X has " + std::to_string(data.X.rows()) +
                          " rows but y has " + std::to_string(data.y.size()));
  }
  if (!data.X.allFinite() || !data.y.allFinite()) {
    throw ValidationError("dataset: non-finite entries in X or y");
  }
  if (data.family == Family::Gaussian) {
    if (data.n() < 4) {
      throw ValidationError("dataset: gaussian family needs n >= 4, got n = " +
                            std::to_string(data.n()));
    }
  } else {
    for (Eigen::Index i = 0; i < data.y.size(); ++i) {
      if (data.y[i] != 0.0 && data.y[i] != 1.0) {
        throw ValidationError("dataset: binomial response must be 0/1, row " +
                              std::to_string(i) + " has " +
                              std::to_string(data.y[i]));
      }
    }
    const int n0 = data.count_class(0);
    const int n1 = data.count_class(1);
    if (n0 < 2 || n1 < 2) {
      throw ValidationError(
          "dataset: binomial family needs >= 2 observations per class, got " +
          std::to_string(n0) + "/" + std::to_string(n1));
    }
  }
}

Dataset select_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.family = data.family;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), data.X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
    out.y[static_cast<Eigen::Index>(i)] = data.y[rows[i]];
  }
  return out;
}

Dataset Standardizer::apply(const Dataset& data) const {
  Dataset out;
  out.family = data.family;
  out.X = (data.X.rowwise() - center.transpose()).array().rowwise() /
          scale.transpose().array();
  out.y = data.y.array() - y_center;
  return out;
}

Dataset Standardizer::invert(const Dataset& data) const {
  Dataset out;
  out.family = data.family;
  out.X = (data.X.array().rowwise() * scale.transpose().array()).rowwise() +
          center.transpose().array();
  out.y = data.y.array() + y_center;
  return out;
}

std::pair<Dataset, Standardizer> robust_standardize(const Dataset& data) {
  const int p = data.p();
  Standardizer s;
  s.mode = StandardizeMode::RobustInitial;
  s.center.resize(p);
  s.scale.resize(p);
  for (int j = 0; j < p; ++j) {
    s.center[j] = median(data.X.col(j));
    const double m = mad(data.X.col(j));
    if (m <= 0.0) throw ZeroSpreadColumn(j, "MAD is zero");
    s.scale[j] = m;
  }
  s.y_center = data.family == Family::Gaussian ? data.y.mean() : 0.0;
  return {s.apply(data), s};
}

namespace {

SubsetStandardized subset_standardize_impl(const Dataset& data,
                                           const std::vector<int>& indices,
                                           bool tolerate_zero_spread) {
  if (indices.size() < 2) {
    throw ValidationError("subset_standardize: need at least 2 indices");
  }
  const int p = data.p();
  const auto m = static_cast<double>(indices.size());
  SubsetStandardized out;
  out.scaler.mode = StandardizeMode::SubsetMoment;
  out.scaler.center.resize(p);
  out.scaler.scale.resize(p);
  double ysum = 0.0;
  for (int i : indices) ysum += data.y[i];
  out.scaler.y_center = data.family == Family::Gaussian ? ysum / m : 0.0;
  for (int j = 0; j < p; ++j) {
    double mean = 0.0;
    for (int i : indices) mean += data.X(i, j);
    mean /= m;
    double ss = 0.0;
    for (int i : indices) {
      const double d = data.X(i, j) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / (m - 1.0));
    out.scaler.center[j] = mean;
    if (sd > 0.0) {
      out.scaler.scale[j] = sd;
    } else if (tolerate_zero_spread) {
      out.scaler.scale[j] = 1.0;
      out.zero_spread.push_back(j);
    } else {
      throw ZeroSpreadColumn(j, "constant within subset");
    }
  }
  out.data = out.scaler.apply(data);
  return out;
}

}  // namespace

std::pair<Dataset, Standardizer> subset_standardize(
    const Dataset& data, const std::vector<int>& indices) {
  auto r = subset_standardize_impl(data, indices, false);
  return {std::move(r.data), std::move(r.scaler)};
}

SubsetStandardized subset_standardize_tolerant(const Dataset& data,
                                               const std::vector<int>& indices) {
  return subset_standardize_impl(data, indices, true);
}

Coefficients backtransform(const Eigen::VectorXd& beta_std, double intercept_std,
                           const Standardizer& s) {
  Coefficients out;
  out.beta = beta_std.array() / s.scale.array();
  out.intercept =
      s.y_center + intercept_std - (beta_std.array() * s.center.array() / s.scale.array()).sum();
  return out;
}

Coefficients SubsetFit::search_frame_coefficients() const {
  return backtransform(beta, intercept, scaler);
}

}  // namespace enetlts
