#pragma once

#include <cstdint>
#include <vector>

#include "enetlts/data.hpp"
#include "enetlts/search_common.hpp"

namespace enetlts {

/// The (alpha, lambda) grid. Lambdas are multiples of lambda0, the level at
/// which the alpha = 1 fit on the full standardized data is the null model.
struct TuningGrid {
  std::vector<double> alphas;        // ascending, in [0, 1]
  std::vector<double> lambda_fracs;  // descending multipliers, all > 0
  double lambda0 = 0.0;

  std::vector<double> lambdas() const;  // fracs * lambda0, descending
};

/// n_alphas equally spaced values in [0, 1]; lambda fractions k/n_lambdas
/// for k = n_lambdas..1 (the spec's 0.025 steps when n_lambdas = 40).
/// lambda0 is left at 0 for the caller to fill in.
TuningGrid default_grid(int n_alphas = 41, int n_lambdas = 40);

/// Largest absolute Pearson correlation between winsorized standardized
/// predictors and the winsorized response, rescaled to the solver's lambda
/// convention; the returned value is raised to the exact null-model
/// threshold when the correlation proxy falls short, so that the alpha = 1
/// fit at lambda0 has all-zero coefficients by construction.
double lambda0_linear(const Dataset& data);

/// Same contract for the binomial family, based on the robustified
/// point-biserial correlation (m_j^1 - m_j^0) / MAD(x_j) *
/// sqrt(n0 n1 / (n (n-1))).
double lambda0_logistic(const Dataset& data);

struct CVPlan {
  int k = 5;
  int repeats = 5;
  std::uint64_t seed = 0;
  bool stratified = false;  // true for binomial
  int threads = 1;
  SolverControl solver;
};

/// Per-cell repeated k-fold cross-validation on the cell's best subset:
/// RMSPE for gaussian, mean deviance for binomial, averaged over repeats.
/// Fold randomness is keyed by (alpha index, lambda index, repeat), so the
/// surface does not depend on evaluation order.
std::vector<double> cv_criterion(const GridResult& grid, const Dataset& data,
                                 const CVPlan& plan, Family family);

struct OptimalCell {
  int cell_index = 0;
  double alpha = 0.0;
  double lambda = 0.0;
  double value = 0.0;
};

/// Minimum of the surface; ties prefer the larger lambda, then the smaller
/// alpha.
OptimalCell select_optimal(const GridResult& grid,
                           const std::vector<double>& surface);

}  // namespace enetlts
