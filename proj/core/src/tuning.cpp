#include "enetlts/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enetlts/errors.hpp"
#include "enetlts/lts_linear.hpp"
#include "enetlts/lts_logistic.hpp"
#include "enetlts/parallel.hpp"
#include "enetlts/rng.hpp"
#include "enetlts/stats.hpp"
#include "cv_util.hpp"

namespace enetlts {
namespace {

constexpr double kWinsorCutoff = 2.0;

/// Exact KKT threshold: the smallest lambda at which the alpha = 1 fit on
/// this data is the null model (for both families the gradient at beta = 0
/// is X'(y - ybar)/n once the intercept is at its optimum).
double null_model_threshold(const Dataset& data) {
  const double n = static_cast<double>(data.n());
  const Eigen::VectorXd centered = data.y.array() - data.y.mean();
  return (data.X.transpose() * centered).cwiseAbs().maxCoeff() / n;
}

}  // namespace

std::vector<double> TuningGrid::lambdas() const {
  std::vector<double> out(lambda_fracs.size());
  for (std::size_t i = 0; i < lambda_fracs.size(); ++i) {
    out[i] = lambda_fracs[i] * lambda0;
  }
  return out;
}

TuningGrid default_grid(int n_alphas, int n_lambdas) {
  if (n_alphas < 1 || n_lambdas < 1) {
    throw ValidationError("default_grid: need at least one alpha and one lambda");
  }
  TuningGrid grid;
  grid.alphas.resize(static_cast<std::size_t>(n_alphas));
  if (n_alphas == 1) {
    grid.alphas[0] = 0.5;
  } else {
    for (int i = 0; i < n_alphas; ++i) {
      grid.alphas[static_cast<std::size_t>(i)] =
          static_cast<double>(i) / static_cast<double>(n_alphas - 1);
    }
  }
  grid.lambda_fracs.resize(static_cast<std::size_t>(n_lambdas));
  for (int k = 0; k < n_lambdas; ++k) {
    grid.lambda_fracs[static_cast<std::size_t>(k)] =
        static_cast<double>(n_lambdas - k) / static_cast<double>(n_lambdas);
  }
  return grid;
}

double lambda0_linear(const Dataset& data) {
  const int p = data.p();
  const double mad_y = mad(data.y);
  const double med_y = median(data.y);
  double max_cor = 0.0;
  if (mad_y > 0.0) {
    const Eigen::VectorXd yw =
        winsorize(((data.y.array() - med_y) / mad_y).matrix(), kWinsorCutoff);
    for (int j = 0; j < p; ++j) {
      const Eigen::VectorXd xw = winsorize(data.X.col(j), kWinsorCutoff);
      max_cor = std::max(max_cor, std::abs(pearson_correlation(xw, yw)));
    }
  }
  const double candidate = max_cor * mad_y;
  const double threshold = null_model_threshold(data);
  const double lambda0 = std::max(candidate, threshold * (1.0 + 1e-8));
  if (lambda0 <= 0.0) {
    throw ValidationError("lambda0_linear: response has no spread");
  }
  return lambda0;
}

double lambda0_logistic(const Dataset& data) {
  const int p = data.p();
  const double n0 = data.count_class(0);
  const double n1 = data.count_class(1);
  const double n = n0 + n1;
  const double scale = std::sqrt(n0 * n1 / (n * (n - 1.0)));
  std::vector<int> rows0, rows1;
  for (int i = 0; i < data.n(); ++i) {
    (data.y[i] == 0.0 ? rows0 : rows1).push_back(i);
  }
  double max_pb = 0.0;
  for (int j = 0; j < p; ++j) {
    const double mad_x = mad(data.X.col(j));
    if (mad_x <= 0.0) throw ZeroSpreadColumn(j, "MAD is zero");
    Eigen::VectorXd x0(rows0.size()), x1(rows1.size());
    for (std::size_t i = 0; i < rows0.size(); ++i) x0[static_cast<Eigen::Index>(i)] = data.X(rows0[i], j);
    for (std::size_t i = 0; i < rows1.size(); ++i) x1[static_cast<Eigen::Index>(i)] = data.X(rows1[i], j);
    const double r_pb = (median(x1) - median(x0)) / mad_x * scale;
    max_pb = std::max(max_pb, std::abs(r_pb));
  }
  const double threshold = null_model_threshold(data);
  return std::max(max_pb, threshold * (1.0 + 1e-8));
}

namespace {

double cell_cv_value(const GridCell& cell, const Dataset& data, const CVPlan& plan,
                     Family family) {
  const std::vector<int>& rows = cell.fit.indices;
  const int h = static_cast<int>(rows.size());
  const int k = std::min(plan.k, h);
  const PenaltySpec spec{cell.alpha, cell.lambda};
  const Coefficients warm = cell.fit.search_frame_coefficients();
  const PhiControl phi;
  const Rng base(plan.seed);
  double total = 0.0;
  for (int rep = 0; rep < plan.repeats; ++rep) {
    Rng rng = base.substream(StreamPurpose::CvFolds,
                             {static_cast<std::uint64_t>(cell.alpha_index),
                              static_cast<std::uint64_t>(cell.lambda_index),
                              static_cast<std::uint64_t>(rep)});
    std::vector<int> fold;
    bool usable = false;
    for (int attempt = 0; attempt < 50 && !usable; ++attempt) {
      fold = detail::assign_folds(data, rows, k, plan.stratified, rng);
      usable = detail::folds_usable(data, rows, fold, k, family == Family::Binomial);
    }
    if (!usable) {
      throw FoldDegenerate("cv_criterion: a training fold keeps losing a class");
    }
    double pooled = 0.0;
    for (int f = 0; f < k; ++f) {
      std::vector<int> train, test;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        (fold[i] == f ? test : train).push_back(rows[i]);
      }
      if (test.empty()) continue;
      Coefficients held;
      if (family == Family::Gaussian) {
        const SubsetFit fitf =
            fit_on_subset_linear(data, train, spec, plan.solver, &warm);
        held = fitf.search_frame_coefficients();
        for (int i : test) {
          const double r = data.y[i] - held.intercept - data.X.row(i).dot(held.beta);
          pooled += r * r;
        }
      } else {
        const SubsetFit fitf =
            fit_on_subset_logistic(data, train, spec, plan.solver, phi, &warm);
        held = fitf.search_frame_coefficients();
        for (int i : test) {
          const double s = held.intercept + data.X.row(i).dot(held.beta);
          pooled += deviance(s, static_cast<int>(data.y[i]));
        }
      }
    }
    total += family == Family::Gaussian
                 ? std::sqrt(pooled / static_cast<double>(h))
                 : pooled / static_cast<double>(h);
  }
  return total / static_cast<double>(plan.repeats);
}

}  // namespace

std::vector<double> cv_criterion(const GridResult& grid, const Dataset& data,
                                 const CVPlan& plan, Family family) {
  std::vector<double> surface(grid.cells.size(), 0.0);
  parallel_for(static_cast<int>(grid.cells.size()), plan.threads, [&](int i) {
    surface[static_cast<std::size_t>(i)] =
        cell_cv_value(grid.cells[static_cast<std::size_t>(i)], data, plan, family);
  });
  return surface;
}

OptimalCell select_optimal(const GridResult& grid,
                           const std::vector<double>& surface) {
  if (surface.empty() || surface.size() != grid.cells.size()) {
    throw ValidationError("select_optimal: surface/grid size mismatch");
  }
  for (double v : surface) {
    if (!std::isfinite(v)) {
      throw ValidationError("select_optimal: non-finite criterion value");
    }
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(surface.size()); ++i) {
    const auto& a = grid.cells[static_cast<std::size_t>(i)];
    const auto& b = grid.cells[static_cast<std::size_t>(best)];
    const double va = surface[static_cast<std::size_t>(i)];
    const double vb = surface[static_cast<std::size_t>(best)];
    const bool better =
        va < vb ||
        (va == vb && (a.lambda > b.lambda ||
                      (a.lambda == b.lambda && a.alpha < b.alpha)));
    if (better) best = i;
  }
  const auto& cell = grid.cells[static_cast<std::size_t>(best)];
  return {best, cell.alpha, cell.lambda, surface[static_cast<std::size_t>(best)]};
}

}  // namespace enetlts
