#include "enetlts/lts_linear.hpp"

#include <cmath>
#include <utility>

#include "enetlts/errors.hpp"
#include "enetlts/parallel.hpp"
#include "lts_util.hpp"

namespace enetlts {
namespace {

// Refits that fail to improve by more than this are rejected and the step
// reported as converged, which keeps the trimmed objective non-increasing
// even though subsets are re-standardized between steps.
double accept_slack(double objective) {
  return 1e-12 * (1.0 + std::abs(objective));
}

Eigen::VectorXd squared_residuals(const Dataset& data, const Coefficients& c) {
  return (data.y.array() - c.intercept - (data.X * c.beta).array()).square();
}

}  // namespace

int h_default(int n) {
  return 3 * (n + 1) / 4;
}

double objective_linear(const SubsetFit& fit, const Dataset& data) {
  const Coefficients c = fit.search_frame_coefficients();
  const Eigen::VectorXd pred = (data.X * c.beta).array() + c.intercept;
  double rss = 0.0;
  for (int i : fit.indices) {
    const double r = data.y[i] - pred[i];
    rss += r * r;
  }
  return rss + 2.0 * static_cast<double>(fit.h()) * fit.lambda *
                   penalty_value(fit.beta, fit.alpha);
}

SubsetFit fit_on_subset_linear(const Dataset& data, std::vector<int> indices,
                               const PenaltySpec& spec, const SolverControl& ctrl,
                               const Coefficients* warm_search_frame) {
  SubsetStandardized std_ = subset_standardize_tolerant(data, indices);
  const Dataset rows = select_rows(std_.data, indices);
  Eigen::VectorXd warm;
  const Eigen::VectorXd* warm_ptr = nullptr;
  if (warm_search_frame != nullptr) {
    warm = warm_search_frame->beta.cwiseProduct(std_.scaler.scale);
    warm_ptr = &warm;
  }
  const FitResult res = fit_gaussian(rows.X, rows.y, spec, warm_ptr, ctrl);
  SubsetFit fit;
  fit.indices = std::move(indices);
  fit.beta = res.beta;
  fit.intercept = res.intercept;
  fit.alpha = spec.alpha;
  fit.lambda = spec.lambda;
  fit.scaler = std::move(std_.scaler);
  fit.objective = objective_linear(fit, data);
  return fit;
}

CStepOutcome c_step_linear_detail(const SubsetFit& current, const Dataset& data,
                                  const PenaltySpec& spec,
                                  const SearchControl& ctrl) {
  const Coefficients c = current.search_frame_coefficients();
  const Eigen::VectorXd r2 = squared_residuals(data, c);
  std::vector<int> next_indices = detail::smallest_k(r2, current.h());

  double reselected = 0.0;
  for (int i : next_indices) reselected += r2[i];
  reselected += 2.0 * static_cast<double>(current.h()) * spec.lambda *
                penalty_value(current.beta, spec.alpha);

  SubsetFit candidate =
      fit_on_subset_linear(data, std::move(next_indices), spec, ctrl.solver, &c);
  CStepOutcome out;
  out.objective_reselected = reselected;
  out.accepted =
      candidate.objective <= current.objective + accept_slack(current.objective);
  out.fit = out.accepted ? std::move(candidate) : current;
  return out;
}

SubsetFit c_step_linear(const SubsetFit& current, const Dataset& data,
                        const PenaltySpec& spec, const SearchControl& ctrl) {
  return c_step_linear_detail(current, data, spec, ctrl).fit;
}

CStepIteration c_steps_to_convergence(SubsetFit start, const Dataset& data,
                                      const PenaltySpec& spec,
                                      const SearchControl& ctrl) {
  CStepIteration it;
  it.fit = std::move(start);
  while (it.steps < ctrl.max_csteps) {
    CStepOutcome out = c_step_linear_detail(it.fit, data, spec, ctrl);
    ++it.steps;
    if (!out.accepted) {
      it.converged = true;
      break;
    }
    const bool same = out.fit.indices == it.fit.indices;
    it.fit = std::move(out.fit);
    if (same) {
      it.converged = true;
      break;
    }
  }
  return it;
}

namespace {

SubsetFit elemental_candidate_linear(const Dataset& data, const PenaltySpec& spec,
                                     const SearchControl& ctrl,
                                     const std::vector<int>& triple) {
  SubsetStandardized std3 = subset_standardize_tolerant(data, triple);
  const Dataset rows = select_rows(std3.data, triple);
  const FitResult res = fit_gaussian(rows.X, rows.y, spec, nullptr, ctrl.solver);
  if (!res.beta.allFinite() || !std::isfinite(res.intercept)) {
    throw DegenerateDraw("elemental triple produced a non-finite fit");
  }
  const Coefficients c = backtransform(res.beta, res.intercept, std3.scaler);
  const Eigen::VectorXd r2 = squared_residuals(data, c);
  std::vector<int> idx = detail::smallest_k(r2, ctrl.h);
  SubsetFit fit = fit_on_subset_linear(data, std::move(idx), spec, ctrl.solver, &c);
  for (int k = 0; k < ctrl.n_initial_csteps; ++k) {
    CStepOutcome out = c_step_linear_detail(fit, data, spec, ctrl);
    fit = std::move(out.fit);
    if (!out.accepted) break;
  }
  return fit;
}

SubsetFit refine_and_select_linear(const Dataset& data, const PenaltySpec& spec,
                                   const SearchControl& ctrl,
                                   std::vector<SubsetFit> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const SubsetFit& a, const SubsetFit& b) {
              return detail::objective_less(a.objective, a.indices, b.objective,
                                            b.indices);
            });
  if (static_cast<int>(candidates.size()) > ctrl.n_keep) {
    candidates.resize(static_cast<std::size_t>(ctrl.n_keep));
  }
  std::vector<SubsetFit> refined(candidates.size());
  parallel_for(static_cast<int>(candidates.size()), ctrl.threads, [&](int i) {
    refined[static_cast<std::size_t>(i)] =
        c_steps_to_convergence(candidates[static_cast<std::size_t>(i)], data, spec,
                               ctrl)
            .fit;
  });
  int best = 0;
  for (int i = 1; i < static_cast<int>(refined.size()); ++i) {
    const auto& a = refined[static_cast<std::size_t>(i)];
    const auto& b = refined[static_cast<std::size_t>(best)];
    if (detail::objective_less(a.objective, a.indices, b.objective, b.indices)) {
      best = i;
    }
  }
  return refined[static_cast<std::size_t>(best)];
}

void validate_search_inputs(const Dataset& data, const SearchControl& ctrl) {
  if (data.n() < 4) {
    throw ValidationError("elemental search: need n >= 4");
  }
  if (ctrl.h < 2 || ctrl.h > data.n()) {
    throw ValidationError("elemental search: need 2 <= h <= n, got h = " +
                          std::to_string(ctrl.h));
  }
}

}  // namespace

SubsetFit elemental_search_linear_from_draws(
    const Dataset& data, const PenaltySpec& spec, const SearchControl& ctrl,
    const std::vector<std::vector<int>>& draws) {
  validate_search_inputs(data, ctrl);
  std::vector<SubsetFit> candidates(draws.size());
  parallel_for(static_cast<int>(draws.size()), ctrl.threads, [&](int i) {
    candidates[static_cast<std::size_t>(i)] = elemental_candidate_linear(
        data, spec, ctrl, draws[static_cast<std::size_t>(i)]);
  });
  return refine_and_select_linear(data, spec, ctrl, std::move(candidates));
}

SubsetFit elemental_search_linear(const Dataset& data, const PenaltySpec& spec,
                                  const SearchControl& ctrl) {
  validate_search_inputs(data, ctrl);
  const Rng base(ctrl.seed);
  std::vector<SubsetFit> candidates(static_cast<std::size_t>(ctrl.n_elemental));
  parallel_for(ctrl.n_elemental, ctrl.threads, [&](int s) {
    Rng rng = base.substream(StreamPurpose::Elemental,
                             {static_cast<std::uint64_t>(s)});
    for (int attempt = 0;; ++attempt) {
      const std::vector<int> triple = rng.sample_without_replacement(data.n(), 3);
      try {
        candidates[static_cast<std::size_t>(s)] =
            elemental_candidate_linear(data, spec, ctrl, triple);
        return;
      } catch (const Error&) {
        if (attempt >= 99) {
          throw DegenerateDraw(
              "elemental search: no usable triple after 100 attempts");
        }
      }
    }
  });
  return refine_and_select_linear(data, spec, ctrl, std::move(candidates));
}

const GridCell& GridResult::at(int alpha_index, int lambda_index) const {
  return cells[static_cast<std::size_t>(alpha_index) * lambdas.size() +
               static_cast<std::size_t>(lambda_index)];
}

GridResult grid_search_linear(const Dataset& data,
                              const std::vector<double>& alphas,
                              const std::vector<double>& lambdas_desc,
                              const SearchControl& ctrl) {
  return detail::grid_sweep(
      alphas, lambdas_desc, ctrl.threads,
      [&](const PenaltySpec& spec) {
        return elemental_search_linear(data, spec, ctrl);
      },
      [&](const PenaltySpec& spec, const SubsetFit& neighbor) {
        const Coefficients warm = neighbor.search_frame_coefficients();
        SubsetFit start =
            fit_on_subset_linear(data, neighbor.indices, spec, ctrl.solver, &warm);
        return c_steps_to_convergence(std::move(start), data, spec, ctrl);
      });
}

}  // namespace enetlts
