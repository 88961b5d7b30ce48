#include "enetlts/lts_logistic.hpp"

#include <cmath>
#include <utility>

#include "enetlts/errors.hpp"
#include "enetlts/parallel.hpp"
#include "lts_util.hpp"

namespace enetlts {
namespace {

double accept_slack(double objective) {
  return 1e-12 * (1.0 + std::abs(objective));
}

Eigen::VectorXd all_scores(const Dataset& data, const Coefficients& c) {
  return ((data.X * c.beta).array() + c.intercept).matrix();
}

Eigen::VectorXd all_deviances(const Dataset& data, const Eigen::VectorXd& scores) {
  Eigen::VectorXd d(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    d[i] = deviance(scores[i], static_cast<int>(data.y[i]));
  }
  return d;
}

/// h0 smallest-deviance class-0 rows plus h1 smallest-deviance class-1 rows,
/// ties by row index; result sorted.
std::vector<int> select_classwise(const Dataset& data, const Eigen::VectorXd& dev,
                                  const BalancedSplit& split) {
  std::vector<int> class_rows[2];
  for (int i = 0; i < data.n(); ++i) {
    class_rows[static_cast<int>(data.y[i])].push_back(i);
  }
  const int want[2] = {split.h0, split.h1};
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(split.h()));
  for (int c = 0; c < 2; ++c) {
    auto& rows = class_rows[c];
    if (static_cast<int>(rows.size()) < want[c]) {
      throw InfeasibleSplit("class " + std::to_string(c) + " has " +
                            std::to_string(rows.size()) + " rows, needs " +
                            std::to_string(want[c]));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [&](int a, int b) { return dev[a] < dev[b]; });
    out.insert(out.end(), rows.begin(), rows.begin() + want[c]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Ranking used for keeping and picking candidates: larger score first,
/// then smaller trimmed objective, then the smaller index set.
bool score_better(const SubsetFit& a, const SubsetFit& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.objective != b.objective) return a.objective < b.objective;
  return a.indices < b.indices;
}

}  // namespace

BalancedSplit balanced_split(int n0, int n1, int h) {
  const int n = n0 + n1;
  if (h < 0 || h > n) {
    throw ValidationError("balanced_split: need 0 <= h <= n");
  }
  if (h == n) return {n0, n1};
  const int h0 = static_cast<int>(
      (static_cast<long long>(n0) + 1) * static_cast<long long>(h) / n);
  const int h1 = h - h0;
  if (h0 > n0 || h1 > n1) {
    throw InfeasibleSplit("balanced_split: h = " + std::to_string(h) +
                          " infeasible for class sizes " + std::to_string(n0) +
                          "/" + std::to_string(n1));
  }
  return {h0, h1};
}

double rho_by(double t, const PhiControl& ctrl) {
  const double c = ctrl.c_by;
  const double ec = std::exp(-std::sqrt(c));
  if (t <= c) return t * ec;
  return ec * (2.0 + 2.0 * std::sqrt(c) + c) -
         2.0 * std::exp(-std::sqrt(t)) * (1.0 + std::sqrt(t));
}

double rho_by_sup(const PhiControl& ctrl) {
  const double c = ctrl.c_by;
  return std::exp(-std::sqrt(c)) * (2.0 + 2.0 * std::sqrt(c) + c);
}

double phi_by(double score, int y, const PhiControl& ctrl) {
  return rho_by_sup(ctrl) - rho_by(deviance(score, y), ctrl);
}

double subset_score(const SubsetFit& fit, const Dataset& data,
                    const PhiControl& ctrl) {
  const Eigen::VectorXd s = all_scores(data, fit.search_frame_coefficients());
  double acc = 0.0;
  for (int i : fit.indices) {
    acc += phi_by(s[i], static_cast<int>(data.y[i]), ctrl);
  }
  return acc;
}

double objective_logistic(const SubsetFit& fit, const Dataset& data) {
  const Eigen::VectorXd s = all_scores(data, fit.search_frame_coefficients());
  double dev = 0.0;
  for (int i : fit.indices) {
    dev += deviance(s[i], static_cast<int>(data.y[i]));
  }
  return dev + static_cast<double>(fit.h()) * fit.lambda *
                   penalty_value(fit.beta, fit.alpha);
}

SubsetFit fit_on_subset_logistic(const Dataset& data, std::vector<int> indices,
                                 const PenaltySpec& spec, const SolverControl& ctrl,
                                 const PhiControl& phi,
                                 const Coefficients* warm_search_frame) {
  SubsetStandardized std_ = subset_standardize_tolerant(data, indices);
  const Dataset rows = select_rows(std_.data, indices);
  Eigen::VectorXd warm;
  const Eigen::VectorXd* warm_ptr = nullptr;
  if (warm_search_frame != nullptr) {
    warm = warm_search_frame->beta.cwiseProduct(std_.scaler.scale);
    warm_ptr = &warm;
  }
  const FitResult res = fit_binomial(rows.X, rows.y, spec, warm_ptr, ctrl);
  SubsetFit fit;
  fit.indices = std::move(indices);
  fit.beta = res.beta;
  fit.intercept = res.intercept;
  fit.alpha = spec.alpha;
  fit.lambda = spec.lambda;
  fit.scaler = std::move(std_.scaler);
  fit.objective = objective_logistic(fit, data);
  fit.score = subset_score(fit, data, phi);
  return fit;
}

CStepOutcome c_step_logistic_detail(const SubsetFit& current, const Dataset& data,
                                    const PenaltySpec& spec,
                                    const BalancedSplit& split,
                                    const SearchControl& ctrl,
                                    const PhiControl& phi) {
  const Coefficients c = current.search_frame_coefficients();
  const Eigen::VectorXd dev = all_deviances(data, all_scores(data, c));
  std::vector<int> next_indices = select_classwise(data, dev, split);

  double reselected = 0.0;
  for (int i : next_indices) reselected += dev[i];
  reselected += static_cast<double>(current.h()) * spec.lambda *
                penalty_value(current.beta, spec.alpha);

  SubsetFit candidate = fit_on_subset_logistic(data, std::move(next_indices), spec,
                                               ctrl.solver, phi, &c);
  CStepOutcome out;
  out.objective_reselected = reselected;
  out.accepted =
      candidate.objective <= current.objective + accept_slack(current.objective);
  out.fit = out.accepted ? std::move(candidate) : current;
  return out;
}

SubsetFit c_step_logistic(const SubsetFit& current, const Dataset& data,
                          const PenaltySpec& spec, const BalancedSplit& split,
                          const SearchControl& ctrl, const PhiControl& phi) {
  return c_step_logistic_detail(current, data, spec, split, ctrl, phi).fit;
}

CStepIteration c_steps_to_convergence_logistic(SubsetFit start, const Dataset& data,
                                               const PenaltySpec& spec,
                                               const BalancedSplit& split,
                                               const SearchControl& ctrl,
                                               const PhiControl& phi) {
  CStepIteration it;
  it.fit = std::move(start);
  while (it.steps < ctrl.max_csteps) {
    CStepOutcome out = c_step_logistic_detail(it.fit, data, spec, split, ctrl, phi);
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

SubsetFit elemental_candidate_logistic(const Dataset& data, const PenaltySpec& spec,
                                       const BalancedSplit& split,
                                       const SearchControl& ctrl,
                                       const PhiControl& phi,
                                       const std::vector<int>& quad) {
  SubsetStandardized std4 = subset_standardize_tolerant(data, quad);
  const Dataset rows = select_rows(std4.data, quad);
  const FitResult res = fit_binomial(rows.X, rows.y, spec, nullptr, ctrl.solver);
  if (!res.beta.allFinite() || !std::isfinite(res.intercept)) {
    throw DegenerateDraw("elemental quadruple produced a non-finite fit");
  }
  const Coefficients c = backtransform(res.beta, res.intercept, std4.scaler);
  const Eigen::VectorXd dev = all_deviances(data, all_scores(data, c));
  std::vector<int> idx = select_classwise(data, dev, split);
  SubsetFit fit =
      fit_on_subset_logistic(data, std::move(idx), spec, ctrl.solver, phi, &c);
  for (int k = 0; k < ctrl.n_initial_csteps; ++k) {
    CStepOutcome out = c_step_logistic_detail(fit, data, spec, split, ctrl, phi);
    fit = std::move(out.fit);
    if (!out.accepted) break;
  }
  return fit;
}

SubsetFit refine_and_select_logistic(const Dataset& data, const PenaltySpec& spec,
                                     const BalancedSplit& split,
                                     const SearchControl& ctrl,
                                     const PhiControl& phi,
                                     std::vector<SubsetFit> candidates) {
  std::sort(candidates.begin(), candidates.end(), score_better);
  if (static_cast<int>(candidates.size()) > ctrl.n_keep) {
    candidates.resize(static_cast<std::size_t>(ctrl.n_keep));
  }
  std::vector<SubsetFit> refined(candidates.size());
  parallel_for(static_cast<int>(candidates.size()), ctrl.threads, [&](int i) {
    refined[static_cast<std::size_t>(i)] =
        c_steps_to_convergence_logistic(candidates[static_cast<std::size_t>(i)],
                                        data, spec, split, ctrl, phi)
            .fit;
  });
  int best = 0;
  for (int i = 1; i < static_cast<int>(refined.size()); ++i) {
    if (score_better(refined[static_cast<std::size_t>(i)],
                     refined[static_cast<std::size_t>(best)])) {
      best = i;
    }
  }
  return refined[static_cast<std::size_t>(best)];
}

void validate_logistic_search(const Dataset& data, const BalancedSplit& split,
                              const SearchControl& ctrl) {
  const int n0 = data.count_class(0);
  const int n1 = data.count_class(1);
  if (n0 < 2 || n1 < 2) {
    throw ValidationError("elemental search: need >= 2 observations per class");
  }
  if (ctrl.h != split.h()) {
    throw ValidationError("elemental search: ctrl.h must equal split.h0 + split.h1");
  }
  if (split.h0 > n0 || split.h1 > n1 || split.h0 < 1 || split.h1 < 1) {
    throw InfeasibleSplit("elemental search: split infeasible for class sizes");
  }
}

}  // namespace

SubsetFit elemental_search_logistic_from_draws(
    const Dataset& data, const PenaltySpec& spec, const BalancedSplit& split,
    const SearchControl& ctrl, const PhiControl& phi,
    const std::vector<std::vector<int>>& draws) {
  validate_logistic_search(data, split, ctrl);
  std::vector<SubsetFit> candidates(draws.size());
  parallel_for(static_cast<int>(draws.size()), ctrl.threads, [&](int i) {
    candidates[static_cast<std::size_t>(i)] = elemental_candidate_logistic(
        data, spec, split, ctrl, phi, draws[static_cast<std::size_t>(i)]);
  });
  return refine_and_select_logistic(data, spec, split, ctrl, phi,
                                    std::move(candidates));
}

SubsetFit elemental_search_logistic(const Dataset& data, const PenaltySpec& spec,
                                    const BalancedSplit& split,
                                    const SearchControl& ctrl,
                                    const PhiControl& phi) {
  validate_logistic_search(data, split, ctrl);
  std::vector<int> class_rows[2];
  for (int i = 0; i < data.n(); ++i) {
    class_rows[static_cast<int>(data.y[i])].push_back(i);
  }
  const Rng base(ctrl.seed);
  std::vector<SubsetFit> candidates(static_cast<std::size_t>(ctrl.n_elemental));
  parallel_for(ctrl.n_elemental, ctrl.threads, [&](int s) {
    Rng rng = base.substream(StreamPurpose::Elemental,
                             {static_cast<std::uint64_t>(s)});
    for (int attempt = 0;; ++attempt) {
      std::vector<int> quad;
      for (int c = 0; c < 2; ++c) {
        const auto pick = rng.sample_without_replacement(
            static_cast<int>(class_rows[c].size()), 2);
        quad.push_back(class_rows[c][static_cast<std::size_t>(pick[0])]);
        quad.push_back(class_rows[c][static_cast<std::size_t>(pick[1])]);
      }
      try {
        candidates[static_cast<std::size_t>(s)] =
            elemental_candidate_logistic(data, spec, split, ctrl, phi, quad);
        return;
      } catch (const Error&) {
        if (attempt >= 99) {
          throw DegenerateDraw(
              "elemental search: no usable quadruple after 100 attempts");
        }
      }
    }
  });
  return refine_and_select_logistic(data, spec, split, ctrl, phi,
                                    std::move(candidates));
}

GridResult grid_search_logistic(const Dataset& data,
                                const std::vector<double>& alphas,
                                const std::vector<double>& lambdas_desc,
                                const BalancedSplit& split,
                                const SearchControl& ctrl, const PhiControl& phi) {
  return detail::grid_sweep(
      alphas, lambdas_desc, ctrl.threads,
      [&](const PenaltySpec& spec) {
        return elemental_search_logistic(data, spec, split, ctrl, phi);
      },
      [&](const PenaltySpec& spec, const SubsetFit& neighbor) {
        const Coefficients warm = neighbor.search_frame_coefficients();
        SubsetFit start = fit_on_subset_logistic(data, neighbor.indices, spec,
                                                 ctrl.solver, phi, &warm);
        return c_steps_to_convergence_logistic(std::move(start), data, spec, split,
                                               ctrl, phi);
      });
}

}  // namespace enetlts
