#pragma once

#include <cstdint>
#include <vector>

#include "enetlts/data.hpp"
#include "enetlts/solver.hpp"

namespace enetlts {

/// Knobs of the subset search, shared by both families.
struct SearchControl {
  int n_elemental = 500;     // elemental starts for the first grid cell
  int n_initial_csteps = 2;  // C-steps applied to every elemental candidate
  int n_keep = 10;           // candidates refined to convergence
  int max_csteps = 20;       // cap per refinement, current subset kept on hit
  int h = 0;                 // subset size; required
  std::uint64_t seed = 0;
  int threads = 1;
  SolverControl solver;
};

struct CStepOutcome {
  SubsetFit fit;
  double objective_reselected;  // trimmed objective after reselection, before refit
  bool accepted;                // false: refit would not improve, current kept
};

struct CStepIteration {
  SubsetFit fit;
  int steps = 0;
  bool converged = false;  // false only when max_csteps was hit
};

struct GridCell {
  int alpha_index = 0;
  int lambda_index = 0;
  double alpha = 0.0;
  double lambda = 0.0;
  SubsetFit fit;
  int csteps = 0;  // C-steps used to converge this cell
};

struct GridResult {
  std::vector<double> alphas;   // ascending
  std::vector<double> lambdas;  // descending
  std::vector<GridCell> cells;  // ordered by (alpha_index, lambda_index)
  double elemental_seconds = 0.0;

  const GridCell& at(int alpha_index, int lambda_index) const;
};

}  // namespace enetlts
