#pragma once

#include <vector>

#include "enetlts/data.hpp"
#include "enetlts/rng.hpp"
#include "enetlts/search_common.hpp"
#include "enetlts/solver.hpp"

namespace enetlts {

/// Default subset size floor((n+1) * 0.75).
int h_default(int n);

/// Trimmed objective sum_{i in H} r_i^2 + 2 h lambda P_alpha(beta), with
/// residuals computed on the search data and the penalty on the fit's own
/// standardized coefficients. Comparable across subsets at fixed
/// (alpha, lambda) only.
double objective_linear(const SubsetFit& fit, const Dataset& data);

/// Standardize on `indices`, fit the penalized gaussian model on those rows
/// and fill in the trimmed objective. `warm_search_frame`, when given, holds
/// coefficients on the search-data scale and is mapped into the new subset's
/// scale before the solve.
SubsetFit fit_on_subset_linear(const Dataset& data, std::vector<int> indices,
                               const PenaltySpec& spec, const SolverControl& ctrl,
                               const Coefficients* warm_search_frame = nullptr);

/// One concentration step: reselect the h rows with the smallest squared
/// residuals (ties by row index), re-standardize on them and refit with a
/// warm start. If the refit fails to improve the trimmed objective the
/// current fit is returned unchanged and the step counts as converged.
CStepOutcome c_step_linear_detail(const SubsetFit& current, const Dataset& data,
                                  const PenaltySpec& spec, const SearchControl& ctrl);
SubsetFit c_step_linear(const SubsetFit& current, const Dataset& data,
                        const PenaltySpec& spec, const SearchControl& ctrl);

/// Iterate C-steps until the index set repeats (or a step is rejected),
/// capped at ctrl.max_csteps.
CStepIteration c_steps_to_convergence(SubsetFit start, const Dataset& data,
                                      const PenaltySpec& spec,
                                      const SearchControl& ctrl);

/// Elemental-subset search for one (alpha, lambda): 500 random triples,
/// each fit and expanded to an h-subset, two C-steps, the best n_keep kept
/// by objective and refined to convergence; returns the minimum-objective
/// fit (ties by index set).
SubsetFit elemental_search_linear(const Dataset& data, const PenaltySpec& spec,
                                  const SearchControl& ctrl);

/// Deterministic seam used by elemental_search_linear and by tests: run the
/// search from explicit elemental draws (no retries).
SubsetFit elemental_search_linear_from_draws(
    const Dataset& data, const PenaltySpec& spec, const SearchControl& ctrl,
    const std::vector<std::vector<int>>& draws);

/// Warm-started sweep over the (alpha, lambda) grid. The first cell (first
/// alpha, largest lambda) is solved from elemental subsets; every other cell
/// starts its C-steps from the best subset of the previous lambda on the
/// same alpha path, or, for the head of an alpha path, from the same lambda
/// at the previous alpha. Alpha paths run in parallel once seeded.
GridResult grid_search_linear(const Dataset& data,
                              const std::vector<double>& alphas,
                              const std::vector<double>& lambdas_desc,
                              const SearchControl& ctrl);

}  // namespace enetlts
