#pragma once

// Internal helpers shared by the linear and logistic subset searches.

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "enetlts/errors.hpp"
#include "enetlts/parallel.hpp"
#include "enetlts/search_common.hpp"

namespace enetlts::detail {

/// Indices of the k smallest values, ties broken by lower index; returned
/// sorted ascending by index.
inline std::vector<int> smallest_k(const Eigen::VectorXd& values, int k) {
  std::vector<int> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] < values[b];
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

/// Deterministic candidate ordering: objective first, index set as the tie
/// breaker so reductions are independent of scheduling.
inline bool objective_less(double obj_a, const std::vector<int>& idx_a,
                           double obj_b, const std::vector<int>& idx_b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  return idx_a < idx_b;
}

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Warm-started traversal shared by both families: lambda descending within
/// each alpha path, paths seeded sequentially at the largest lambda, then
/// run in parallel. solve_first(spec) -> SubsetFit solves the very first
/// cell; solve_warm(spec, neighbor) -> CStepIteration solves a cell from a
/// neighboring best subset.
template <typename SolveFirst, typename SolveWarm>
GridResult grid_sweep(const std::vector<double>& alphas,
                      const std::vector<double>& lambdas_desc, int threads,
                      SolveFirst&& solve_first, SolveWarm&& solve_warm) {
  if (alphas.empty() || lambdas_desc.empty()) {
    throw ValidationError("grid search: empty grid");
  }
  GridResult grid;
  grid.alphas = alphas;
  grid.lambdas = lambdas_desc;
  const int na = static_cast<int>(alphas.size());
  const int nl = static_cast<int>(lambdas_desc.size());
  grid.cells.resize(static_cast<std::size_t>(na) * static_cast<std::size_t>(nl));
  auto cell_at = [&](int ai, int li) -> GridCell& {
    return grid.cells[static_cast<std::size_t>(ai) * static_cast<std::size_t>(nl) +
                      static_cast<std::size_t>(li)];
  };
  auto fill = [&](int ai, int li, const SubsetFit& neighbor) {
    const PenaltySpec spec{alphas[static_cast<std::size_t>(ai)],
                           lambdas_desc[static_cast<std::size_t>(li)]};
    CStepIteration it = solve_warm(spec, neighbor);
    GridCell& cell = cell_at(ai, li);
    cell.alpha_index = ai;
    cell.lambda_index = li;
    cell.alpha = spec.alpha;
    cell.lambda = spec.lambda;
    cell.fit = std::move(it.fit);
    cell.csteps = it.steps;
  };

  {
    const StageTimer timer;
    const PenaltySpec first{alphas[0], lambdas_desc[0]};
    GridCell& cell = cell_at(0, 0);
    cell.alpha = first.alpha;
    cell.lambda = first.lambda;
    cell.fit = solve_first(first);
    grid.elemental_seconds = timer.seconds();
  }
  for (int ai = 1; ai < na; ++ai) {
    fill(ai, 0, cell_at(ai - 1, 0).fit);
  }
  parallel_for(na, threads, [&](int ai) {
    for (int li = 1; li < nl; ++li) {
      fill(ai, li, cell_at(ai, li - 1).fit);
    }
  });
  return grid;
}

}  // namespace enetlts::detail
