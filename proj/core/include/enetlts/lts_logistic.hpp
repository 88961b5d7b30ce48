#pragma once

#include <vector>

#include "enetlts/data.hpp"
#include "enetlts/rng.hpp"
#include "enetlts/search_common.hpp"
#include "enetlts/solver.hpp"

namespace enetlts {

/// Class sizes of an h-subset, proportional to the full-data class sizes.
struct BalancedSplit {
  int h0 = 0;
  int h1 = 0;
  int h() const { return h0 + h1; }
};

/// h0 = floor((n0+1) h / n), h1 = h - h0; h = n returns (n0, n1) exactly.
/// Throws InfeasibleSplit when a class cannot supply its share.
BalancedSplit balanced_split(int n0, int n1, int h);

struct PhiControl {
  double c_by = 0.5;  // Croux-Haesbroeck tuning constant
};

/// rho_c(t): t e^{-sqrt(c)} for t <= c, else
/// e^{-sqrt(c)} (2 + 2 sqrt(c) + c) - 2 e^{-sqrt(t)} (1 + sqrt(t)).
double rho_by(double t, const PhiControl& ctrl);
/// Supremum of rho_c, reached as t -> infinity.
double rho_by_sup(const PhiControl& ctrl);

/// Bounded score quality rho_c(inf) - rho_c(d(score, y)): largest for
/// confident correct classification, near zero for gross misclassification.
double phi_by(double score, int y, const PhiControl& ctrl);

/// sum_{i in H} phi_by(score_i, y_i); candidate subsets are ranked by this
/// value, largest first.
double subset_score(const SubsetFit& fit, const Dataset& data,
                    const PhiControl& ctrl);

/// Trimmed objective sum_{i in H} d_i + h lambda P_alpha(beta).
double objective_logistic(const SubsetFit& fit, const Dataset& data);

/// Standardize on `indices`, fit the penalized binomial model on those rows;
/// fills objective and phi_BY score.
SubsetFit fit_on_subset_logistic(const Dataset& data, std::vector<int> indices,
                                 const PenaltySpec& spec, const SolverControl& ctrl,
                                 const PhiControl& phi,
                                 const Coefficients* warm_search_frame = nullptr);

/// One deviance-based concentration step with class-proportional selection:
/// the h0 smallest-deviance class-0 rows plus the h1 smallest-deviance
/// class-1 rows (ties by row index). A refit that does not improve the
/// trimmed objective is rejected and the current fit kept.
CStepOutcome c_step_logistic_detail(const SubsetFit& current, const Dataset& data,
                                    const PenaltySpec& spec,
                                    const BalancedSplit& split,
                                    const SearchControl& ctrl,
                                    const PhiControl& phi);
SubsetFit c_step_logistic(const SubsetFit& current, const Dataset& data,
                          const PenaltySpec& spec, const BalancedSplit& split,
                          const SearchControl& ctrl, const PhiControl& phi);

CStepIteration c_steps_to_convergence_logistic(SubsetFit start, const Dataset& data,
                                               const PenaltySpec& spec,
                                               const BalancedSplit& split,
                                               const SearchControl& ctrl,
                                               const PhiControl& phi);

/// Elemental search with four-observation starts (two per class); candidates
/// after the initial C-steps are ranked by subset_score (largest kept) and
/// the converged subset with the largest score wins. Ties go to the smaller
/// trimmed objective, then the lexicographically smallest index set.
SubsetFit elemental_search_logistic(const Dataset& data, const PenaltySpec& spec,
                                    const BalancedSplit& split,
                                    const SearchControl& ctrl,
                                    const PhiControl& phi);

SubsetFit elemental_search_logistic_from_draws(
    const Dataset& data, const PenaltySpec& spec, const BalancedSplit& split,
    const SearchControl& ctrl, const PhiControl& phi,
    const std::vector<std::vector<int>>& draws);

/// Same traversal contract as grid_search_linear, with deviance C-steps and
/// score-based cell-internal selection.
GridResult grid_search_logistic(const Dataset& data,
                                const std::vector<double>& alphas,
                                const std::vector<double>& lambdas_desc,
                                const BalancedSplit& split,
                                const SearchControl& ctrl, const PhiControl& phi);

}  // namespace enetlts
