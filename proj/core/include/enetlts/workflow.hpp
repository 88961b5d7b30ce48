#pragma once

#include <cstdint>

#include "enetlts/data.hpp"
#include "enetlts/lts_logistic.hpp"
#include "enetlts/search_common.hpp"
#include "enetlts/tuning.hpp"

namespace enetlts {

/// End-to-end fit configuration. The search/solver sub-controls keep their
/// own defaults; h, seed and thread count are filled in from here.
struct FitConfig {
  int h = 0;                 // explicit subset size; 0 derives from h_fraction
  double h_fraction = 0.75;  // h = floor((n+1) * h_fraction)
  int n_alphas = 41;
  int n_lambdas = 40;
  int cv_folds = 5;
  int cv_repeats = 5;
  double delta = 0.0125;  // outlier flagging level
  std::uint64_t seed = 1;
  int threads = 1;
  SearchControl search;
  PhiControl phi;
};

struct StageTimings {
  double elemental = 0.0;
  double grid = 0.0;
  double cv = 0.0;
  double reweight = 0.0;
  double total = 0.0;
};

int resolve_h(int n, const FitConfig& cfg);

/// The full robust pipeline: robust standardization, lambda0, warm-started
/// grid search, repeated k-fold CV on best subsets, outlier flagging and the
/// reweighted refit with an updated lambda. Coefficients in the returned
/// ModelFit are on the original data scale.
ModelFit fit_enet_lts(const Dataset& raw, const FitConfig& cfg,
                      StageTimings* timings = nullptr);

/// Non-robust comparator: the plain penalized fit on moment-standardized
/// full data, (alpha, lambda) chosen by k-fold CV over the same alpha grid
/// and a lambda path anchored at the classical null-model threshold.
ModelFit fit_enet_classic(const Dataset& raw, const FitConfig& cfg);

Eigen::VectorXd predict_linear(const ModelFit& fit, const Eigen::MatrixXd& X,
                               bool reweighted = true);
/// Class-1 probabilities, clamped inside (0, 1).
Eigen::VectorXd predict_prob(const ModelFit& fit, const Eigen::MatrixXd& X,
                             bool reweighted = true);

}  // namespace enetlts
