#include "enetlts/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enetlts/errors.hpp"
#include "enetlts/lts_linear.hpp"
#include "enetlts/parallel.hpp"
#include "enetlts/reweighting.hpp"
#include "enetlts/rng.hpp"
#include "cv_util.hpp"
#include "lts_util.hpp"

namespace enetlts {

int resolve_h(int n, const FitConfig& cfg) {
  if (cfg.h > 0) {
    if (cfg.h > n) throw ValidationError("fit: h exceeds n");
    return cfg.h;
  }
  if (!(cfg.h_fraction > 0.5 && cfg.h_fraction <= 1.0)) {
    throw ValidationError("fit: h fraction must be in (0.5, 1]");
  }
  return static_cast<int>(std::floor((n + 1) * cfg.h_fraction));
}

namespace {

ModelFit assemble(const Dataset& raw, const Standardizer& s1, const GridResult& grid,
                  const std::vector<double>& surface, const OptimalCell& opt,
                  Family family) {
  const SubsetFit& best = grid.cells[static_cast<std::size_t>(opt.cell_index)].fit;
  const Coefficients c1 = best.search_frame_coefficients();
  const Coefficients c0 = backtransform(c1.beta, c1.intercept, s1);
  ModelFit fit;
  fit.family = family;
  fit.beta_raw = c0.beta;
  fit.intercept_raw = c0.intercept;
  fit.beta_rew = c0.beta;
  fit.intercept_rew = c0.intercept;
  fit.alpha_opt = opt.alpha;
  fit.lambda_opt = opt.lambda;
  fit.lambda_upd = opt.lambda;
  fit.best_subset = best.indices;
  fit.weights.assign(static_cast<std::size_t>(raw.n()), 1);
  fit.n_w = raw.n();
  fit.cv_surface.reserve(grid.cells.size());
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    fit.cv_surface.push_back(
        {grid.cells[i].alpha, grid.cells[i].lambda, surface[i]});
  }
  return fit;
}

}  // namespace

ModelFit fit_enet_lts(const Dataset& raw, const FitConfig& cfg,
                      StageTimings* timings) {
  const detail::StageTimer total_timer;
  validate(raw);
  const auto [data, s1] = robust_standardize(raw);
  const int n = data.n();
  const int h = resolve_h(n, cfg);
  const Family family = raw.family;

  SearchControl ctrl = cfg.search;
  ctrl.h = h;
  ctrl.seed = cfg.seed;
  ctrl.threads = cfg.threads;

  TuningGrid tg = default_grid(cfg.n_alphas, cfg.n_lambdas);
  tg.lambda0 =
      family == Family::Gaussian ? lambda0_linear(data) : lambda0_logistic(data);

  BalancedSplit split;
  if (family == Family::Binomial) {
    split = balanced_split(data.count_class(0), data.count_class(1), h);
  }

  const detail::StageTimer grid_timer;
  const GridResult grid =
      family == Family::Gaussian
          ? grid_search_linear(data, tg.alphas, tg.lambdas(), ctrl)
          : grid_search_logistic(data, tg.alphas, tg.lambdas(), split, ctrl,
                                 cfg.phi);
  const double grid_seconds = grid_timer.seconds();

  CVPlan plan;
  plan.k = cfg.cv_folds;
  plan.repeats = cfg.cv_repeats;
  plan.seed = cfg.seed;
  plan.stratified = family == Family::Binomial;
  plan.threads = cfg.threads;
  plan.solver = cfg.search.solver;

  const detail::StageTimer cv_timer;
  const std::vector<double> surface = cv_criterion(grid, data, plan, family);
  const OptimalCell opt = select_optimal(grid, surface);
  const double cv_seconds = cv_timer.seconds();

  ModelFit fit = assemble(raw, s1, grid, surface, opt, family);
  const SubsetFit& best = grid.cells[static_cast<std::size_t>(opt.cell_index)].fit;

  const detail::StageTimer reweight_timer;
  try {
    const Eigen::VectorXd r_std =
        standardized_residuals(best, data, family, cfg.search.solver.prob_clamp);
    const WeightVector wv = outlier_weights(r_std, cfg.delta);
    fit.weights = wv.w;
    fit.n_w = wv.n_w;
    std::vector<int> wrows;
    for (int i = 0; i < n; ++i) {
      if (wv.w[static_cast<std::size_t>(i)] == 1) wrows.push_back(i);
    }
    const Dataset wdata = select_rows(data, wrows);
    const double lambda0_w = family == Family::Gaussian
                                 ? lambda0_linear(wdata)
                                 : lambda0_logistic(wdata);
    std::vector<double> lambda_grid(tg.lambda_fracs.size());
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
      lambda_grid[i] = tg.lambda_fracs[i] * lambda0_w;
    }
    const ReweightResult rew =
        reweighted_fit(data, wv, opt.alpha, lambda_grid, plan, family);
    const Coefficients rew0 = backtransform(rew.beta, rew.intercept, s1);
    fit.beta_rew = rew0.beta;
    fit.intercept_rew = rew0.intercept;
    fit.lambda_upd = rew.lambda_upd;
  } catch (const Error&) {
    // Reweighting is impossible (all rows flagged, or too few kept); the raw
    // fit stands and the model is marked accordingly.
    fit.reweight_ok = false;
    fit.weights.assign(static_cast<std::size_t>(n), 1);
    fit.n_w = n;
  }
  if (timings != nullptr) {
    timings->elemental = grid.elemental_seconds;
    timings->grid = grid_seconds - grid.elemental_seconds;
    timings->cv = cv_seconds;
    timings->reweight = reweight_timer.seconds();
    timings->total = total_timer.seconds();
  }
  return fit;
}

namespace {

double classic_cell_cv(const Dataset& data, const std::vector<std::vector<int>>& folds,
                       double alpha, const std::vector<double>& lambdas_desc,
                       int lambda_index, std::vector<Eigen::VectorXd>& warm,
                       std::vector<bool>& has_warm, const SolverControl& solver,
                       Family family) {
  const PenaltySpec spec{alpha, lambdas_desc[static_cast<std::size_t>(lambda_index)]};
  const int n = data.n();
  double total = 0.0;
  for (std::size_t rep = 0; rep < folds.size(); ++rep) {
    const auto& fold = folds[rep];
    const int k = *std::max_element(fold.begin(), fold.end()) + 1;
    double pooled = 0.0;
    for (int f = 0; f < k; ++f) {
      std::vector<int> train, test;
      for (int i = 0; i < n; ++i) {
        (fold[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
      }
      if (test.empty()) continue;
      const Dataset rows = select_rows(data, train);
      const std::size_t wi = rep * static_cast<std::size_t>(k) +
                             static_cast<std::size_t>(f);
      const Eigen::VectorXd* w0 = has_warm[wi] ? &warm[wi] : nullptr;
      const FitResult res =
          family == Family::Gaussian
              ? fit_gaussian(rows.X, rows.y, spec, w0, solver)
              : fit_binomial(rows.X, rows.y, spec, w0, solver);
      warm[wi] = res.beta;
      has_warm[wi] = true;
      for (int i : test) {
        const double pred = res.intercept + data.X.row(i).dot(res.beta);
        if (family == Family::Gaussian) {
          const double r = data.y[i] - pred;
          pooled += r * r;
        } else {
          pooled += deviance(pred, static_cast<int>(data.y[i]));
        }
      }
    }
    total += pooled / n;
  }
  return total / static_cast<double>(folds.size());
}

}  // namespace

ModelFit fit_enet_classic(const Dataset& raw, const FitConfig& cfg) {
  validate(raw);
  const int n = raw.n();
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  const auto [data, s] = subset_standardize(raw, all);
  const Family family = raw.family;

  const double n_d = static_cast<double>(n);
  const Eigen::VectorXd centered = data.y.array() - data.y.mean();
  const double lambda_max =
      (data.X.transpose() * centered).cwiseAbs().maxCoeff() / n_d * (1.0 + 1e-8);

  TuningGrid tg = default_grid(cfg.n_alphas, cfg.n_lambdas);
  tg.lambda0 = lambda_max;
  const std::vector<double> lambdas = tg.lambdas();
  const int na = static_cast<int>(tg.alphas.size());
  const int nl = static_cast<int>(lambdas.size());

  // Classic CV keeps a single fold layout per repeat, shared by every grid
  // cell.
  const int k = std::min(cfg.cv_folds, n);
  const Rng base(cfg.seed);
  std::vector<std::vector<int>> folds(1);
  {
    Rng rng = base.substream(StreamPurpose::ClassicCv, {0});
    bool usable = false;
    for (int attempt = 0; attempt < 50 && !usable; ++attempt) {
      folds[0] = detail::assign_folds(data, all, k, family == Family::Binomial, rng);
      usable = detail::folds_usable(data, all, folds[0], k,
                                    family == Family::Binomial);
    }
    if (!usable) {
      throw FoldDegenerate("classic fit: a training fold keeps losing a class");
    }
  }

  std::vector<double> surface(static_cast<std::size_t>(na) *
                              static_cast<std::size_t>(nl));
  parallel_for(na, cfg.threads, [&](int ai) {
    std::vector<Eigen::VectorXd> warm(folds.size() * static_cast<std::size_t>(k));
    std::vector<bool> has_warm(warm.size(), false);
    for (int li = 0; li < nl; ++li) {
      surface[static_cast<std::size_t>(ai) * static_cast<std::size_t>(nl) +
              static_cast<std::size_t>(li)] =
          classic_cell_cv(data, folds, tg.alphas[static_cast<std::size_t>(ai)],
                          lambdas, li, warm, has_warm, cfg.search.solver, family);
    }
  });

  int best = 0;
  for (int i = 1; i < na * nl; ++i) {
    const double va = surface[static_cast<std::size_t>(i)];
    const double vb = surface[static_cast<std::size_t>(best)];
    const double la = lambdas[static_cast<std::size_t>(i % nl)];
    const double lb = lambdas[static_cast<std::size_t>(best % nl)];
    const double aa = tg.alphas[static_cast<std::size_t>(i / nl)];
    const double ab = tg.alphas[static_cast<std::size_t>(best / nl)];
    if (va < vb || (va == vb && (la > lb || (la == lb && aa < ab)))) best = i;
  }
  const PenaltySpec opt{tg.alphas[static_cast<std::size_t>(best / nl)],
                        lambdas[static_cast<std::size_t>(best % nl)]};
  const FitResult res = family == Family::Gaussian
                            ? fit_gaussian(data.X, data.y, opt, nullptr,
                                           cfg.search.solver)
                            : fit_binomial(data.X, data.y, opt, nullptr,
                                           cfg.search.solver);
  const Coefficients c0 = backtransform(res.beta, res.intercept, s);

  ModelFit fit;
  fit.family = family;
  fit.beta_raw = c0.beta;
  fit.intercept_raw = c0.intercept;
  fit.beta_rew = c0.beta;
  fit.intercept_rew = c0.intercept;
  fit.alpha_opt = opt.alpha;
  fit.lambda_opt = opt.lambda;
  fit.lambda_upd = opt.lambda;
  fit.best_subset = all;
  fit.weights.assign(static_cast<std::size_t>(n), 1);
  fit.n_w = n;
  fit.cv_surface.reserve(surface.size());
  for (int i = 0; i < na * nl; ++i) {
    fit.cv_surface.push_back({tg.alphas[static_cast<std::size_t>(i / nl)],
                              lambdas[static_cast<std::size_t>(i % nl)],
                              surface[static_cast<std::size_t>(i)]});
  }
  return fit;
}

Eigen::VectorXd predict_linear(const ModelFit& fit, const Eigen::MatrixXd& X,
                               bool reweighted) {
  const Eigen::VectorXd& beta = reweighted ? fit.beta_rew : fit.beta_raw;
  const double b0 = reweighted ? fit.intercept_rew : fit.intercept_raw;
  return ((X * beta).array() + b0).matrix();
}

Eigen::VectorXd predict_prob(const ModelFit& fit, const Eigen::MatrixXd& X,
                             bool reweighted) {
  Eigen::VectorXd s = predict_linear(fit, X, reweighted);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    s[i] = std::clamp(sigmoid(s[i]), 1e-15, 1.0 - 1e-15);
  }
  return s;
}

}  // namespace enetlts
