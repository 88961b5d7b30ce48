#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace enetlts {

enum class Family { Gaussian, Binomial };

/// Predictor matrix plus response. For the binomial family the response
/// holds 0/1 labels; both classes must be present.
struct Dataset {
  Eigen::MatrixXd X;  // n x p, column-major
  Eigen::VectorXd y;  // length n
  Family family = Family::Gaussian;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
  int count_class(int label) const;
};

/// Checks the dataset invariants; throws ValidationError on violation.
///   - finite X and y
///   - gaussian: n >= 4
///   - binomial: labels in {0,1}, each class with >= 2 observations
void validate(const Dataset& data);

Dataset select_rows(const Dataset& data, const std::vector<int>& rows);

enum class StandardizeMode { RobustInitial, SubsetMoment };

/// Columnwise affine transform x' = (x - center) / scale, plus a response
/// shift for the gaussian family. Invertible by construction.
struct Standardizer {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;  // strictly positive
  double y_center = 0.0;
  StandardizeMode mode = StandardizeMode::RobustInitial;

  Dataset apply(const Dataset& data) const;
  Dataset invert(const Dataset& data) const;
};

/// Center by columnwise medians, scale by consistency-scaled MADs; the
/// gaussian response is mean-centered. Throws ZeroSpreadColumn if any
/// column has MAD zero.
std::pair<Dataset, Standardizer> robust_standardize(const Dataset& data);

/// Center/scale by means and standard deviations computed on `indices`
/// only (divisor m-1), applied to all rows; the gaussian response is
/// centered by its subset mean. Throws ZeroSpreadColumn on a column that
/// is constant within the subset.
std::pair<Dataset, Standardizer> subset_standardize(
    const Dataset& data, const std::vector<int>& indices);

/// Like subset_standardize, but zero-spread columns get scale 1 and are
/// reported instead of raising; the solver pins their coefficients at 0
/// because the centered column vanishes on the fit rows.
struct SubsetStandardized {
  Dataset data;
  Standardizer scaler;
  std::vector<int> zero_spread;
};
SubsetStandardized subset_standardize_tolerant(const Dataset& data,
                                               const std::vector<int>& indices);

struct Coefficients {
  Eigen::VectorXd beta;
  double intercept = 0.0;
};

/// Map coefficients fit on standardized data back to the scale the
/// standardizer was built from. Linear predictors are preserved.
Coefficients backtransform(const Eigen::VectorXd& beta_std, double intercept_std,
                           const Standardizer& s);

/// An h-subset together with the penalized fit computed on it. The
/// coefficients live on the subset-standardized scale recorded in
/// `scaler`; `objective` is the trimmed objective at (alpha, lambda).
struct SubsetFit {
  std::vector<int> indices;  // sorted, |indices| = h
  Eigen::VectorXd beta;
  double intercept = 0.0;
  double objective = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  Standardizer scaler;
  double score = 0.0;  // phi_BY subset score (logistic search only)

  int h() const { return static_cast<int>(indices.size()); }
  /// Coefficients expressed on the scale of the search data.
  Coefficients search_frame_coefficients() const;
};

/// Final fitted model on the original data scale.
struct ModelFit {
  Eigen::VectorXd beta_raw;
  double intercept_raw = 0.0;
  Eigen::VectorXd beta_rew;
  double intercept_rew = 0.0;
  double alpha_opt = 0.0;
  double lambda_opt = 0.0;
  double lambda_upd = 0.0;
  std::vector<int> best_subset;
  std::vector<int> weights;  // 0/1 per training row
  int n_w = 0;
  bool reweight_ok = true;
  Family family = Family::Gaussian;

  struct CvCell {
    double alpha;
    double lambda;
    double value;
  };
  std::vector<CvCell> cv_surface;
};

}  // namespace enetlts
