#pragma once

#include <vector>

#include "enetlts/data.hpp"
#include "enetlts/tuning.hpp"

namespace enetlts {

struct WeightVector {
  std::vector<int> w;  // 0/1 per observation
  int n_w = 0;
  double threshold = 0.0;  // quantile the residuals were cut at
};

/// Scale of the h subset residuals: root mean square about their median,
/// divided by the consistency factor sqrt(1 - (2n/h) q phi(q)) with
/// q = Phi^-1((h/n + 1)/2). For h = n the factor is 1.
double trimmed_scale(const Eigen::VectorXd& residuals,
                     const std::vector<int>& subset);

/// Gaussian: (r_i - med_H(r)) / sigma_hat with sigma_hat from trimmed_scale.
/// Binomial: Pearson residuals (y_i - pi_i) / sqrt(pi_i (1 - pi_i)) with the
/// probabilities clamped by prob_clamp.
Eigen::VectorXd standardized_residuals(const SubsetFit& fit, const Dataset& data,
                                       Family family, double prob_clamp = 1e-5);

/// w_i = 1 iff |r_i| <= Phi^-1(1 - delta). Throws AllZeroWeights when every
/// observation is flagged.
WeightVector outlier_weights(const Eigen::VectorXd& r_std, double delta);

struct ReweightResult {
  Eigen::VectorXd beta;  // on the scale of `data`
  double intercept = 0.0;
  double lambda_upd = 0.0;
};

/// Select lambda_upd by k-fold CV over the descending lambda grid on the
/// weighted rows only (alpha frozen), then refit the penalized model on all
/// weighted rows at (alpha_opt, lambda_upd).
ReweightResult reweighted_fit(const Dataset& data, const WeightVector& weights,
                              double alpha_opt,
                              const std::vector<double>& lambda_grid_desc,
                              const CVPlan& plan, Family family);

}  // namespace enetlts
