#include "enetlts/reweighting.hpp"

#include <algorithm>
#include <cmath>

#include "enetlts/errors.hpp"
#include "enetlts/lts_linear.hpp"
#include "enetlts/lts_logistic.hpp"
#include "enetlts/rng.hpp"
#include "enetlts/stats.hpp"
#include "cv_util.hpp"

namespace enetlts {

double trimmed_scale(const Eigen::VectorXd& residuals,
                     const std::vector<int>& subset) {
  const int h = static_cast<int>(subset.size());
  const int n = static_cast<int>(residuals.size());
  if (h < 2 || h > n) {
    throw ValidationError("trimmed_scale: need 2 <= h <= n");
  }
  Eigen::VectorXd rs(h);
  for (int i = 0; i < h; ++i) rs[i] = residuals[subset[static_cast<std::size_t>(i)]];
  const double med = median(rs);
  const double s = std::sqrt((rs.array() - med).square().sum() / h);
  if (h == n) return s;
  const double frac = static_cast<double>(h) / n;
  const double q = standard_normal_quantile((frac + 1.0) / 2.0);
  const double factor = 1.0 - (2.0 / frac) * q * standard_normal_pdf(q);
  return s / std::sqrt(std::max(factor, 1e-12));
}

Eigen::VectorXd standardized_residuals(const SubsetFit& fit, const Dataset& data,
                                       Family family, double prob_clamp) {
  const Coefficients c = fit.search_frame_coefficients();
  const Eigen::VectorXd pred = ((data.X * c.beta).array() + c.intercept).matrix();
  Eigen::VectorXd out(data.n());
  if (family == Family::Gaussian) {
    const Eigen::VectorXd r = data.y - pred;
    Eigen::VectorXd rh(fit.h());
    for (int i = 0; i < fit.h(); ++i) {
      rh[i] = r[fit.indices[static_cast<std::size_t>(i)]];
    }
    const double med_h = median(rh);
    const double scale = trimmed_scale(r, fit.indices);
    out = (r.array() - med_h) / scale;
  } else {
    for (int i = 0; i < data.n(); ++i) {
      const double pi =
          std::clamp(sigmoid(pred[i]), prob_clamp, 1.0 - prob_clamp);
      out[i] = (data.y[i] - pi) / std::sqrt(pi * (1.0 - pi));
    }
  }
  return out;
}

WeightVector outlier_weights(const Eigen::VectorXd& r_std, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw ValidationError("outlier_weights: delta must be in (0, 0.5)");
  }
  WeightVector wv;
  wv.threshold = standard_normal_quantile(1.0 - delta);
  wv.w.resize(static_cast<std::size_t>(r_std.size()));
  for (Eigen::Index i = 0; i < r_std.size(); ++i) {
    wv.w[static_cast<std::size_t>(i)] = std::abs(r_std[i]) <= wv.threshold ? 1 : 0;
    wv.n_w += wv.w[static_cast<std::size_t>(i)];
  }
  if (wv.n_w == 0) {
    throw AllZeroWeights("outlier_weights: every observation was flagged");
  }
  return wv;
}

ReweightResult reweighted_fit(const Dataset& data, const WeightVector& weights,
                              double alpha_opt,
                              const std::vector<double>& lambda_grid_desc,
                              const CVPlan& plan, Family family) {
  if (static_cast<int>(weights.w.size()) != data.n()) {
    throw ValidationError("reweighted_fit: weight length mismatch");
  }
  if (lambda_grid_desc.empty()) {
    throw ValidationError("reweighted_fit: empty lambda grid");
  }
  std::vector<int> rows;
  for (int i = 0; i < data.n(); ++i) {
    if (weights.w[static_cast<std::size_t>(i)] == 1) rows.push_back(i);
  }
  if (static_cast<int>(rows.size()) < 5) {
    throw ValidationError("reweighted_fit: need at least 5 weighted rows, got " +
                          std::to_string(rows.size()));
  }
  const int h = static_cast<int>(rows.size());
  const int k = std::min(plan.k, h);
  const PhiControl phi;
  const bool binomial = family == Family::Binomial;
  const int nl = static_cast<int>(lambda_grid_desc.size());

  double best_value = 0.0;
  int best_lambda = 0;
  if (nl == 1) {
    best_lambda = 0;
  } else {
    // One fold layout per repeat, shared across the lambda path; each
    // (repeat, fold) chain is warm-started from the previous lambda.
    const Rng base(plan.seed);
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(plan.repeats));
    for (int rep = 0; rep < plan.repeats; ++rep) {
      Rng rng = base.substream(StreamPurpose::ReweightCv,
                               {static_cast<std::uint64_t>(rep)});
      bool usable = false;
      for (int attempt = 0; attempt < 50 && !usable; ++attempt) {
        folds[static_cast<std::size_t>(rep)] =
            detail::assign_folds(data, rows, k, plan.stratified, rng);
        usable = detail::folds_usable(data, rows,
                                      folds[static_cast<std::size_t>(rep)], k,
                                      binomial);
      }
      if (!usable) {
        throw FoldDegenerate("reweighted_fit: a training fold keeps losing a class");
      }
    }
    std::vector<Coefficients> warm(
        static_cast<std::size_t>(plan.repeats) * static_cast<std::size_t>(k));
    std::vector<bool> has_warm(warm.size(), false);
    for (int li = 0; li < nl; ++li) {
      const PenaltySpec spec{alpha_opt, lambda_grid_desc[static_cast<std::size_t>(li)]};
      double total = 0.0;
      for (int rep = 0; rep < plan.repeats; ++rep) {
        double pooled = 0.0;
        for (int f = 0; f < k; ++f) {
          std::vector<int> train, test;
          for (std::size_t i = 0; i < rows.size(); ++i) {
            (folds[static_cast<std::size_t>(rep)][i] == f ? test : train)
                .push_back(rows[i]);
          }
          if (test.empty()) continue;
          const std::size_t wi = static_cast<std::size_t>(rep) *
                                     static_cast<std::size_t>(k) +
                                 static_cast<std::size_t>(f);
          const Coefficients* w0 = has_warm[wi] ? &warm[wi] : nullptr;
          Coefficients held;
          if (binomial) {
            const SubsetFit fitf =
                fit_on_subset_logistic(data, train, spec, plan.solver, phi, w0);
            held = fitf.search_frame_coefficients();
            for (int i : test) {
              pooled += deviance(held.intercept + data.X.row(i).dot(held.beta),
                                 static_cast<int>(data.y[i]));
            }
          } else {
            const SubsetFit fitf =
                fit_on_subset_linear(data, train, spec, plan.solver, w0);
            held = fitf.search_frame_coefficients();
            for (int i : test) {
              const double r =
                  data.y[i] - held.intercept - data.X.row(i).dot(held.beta);
              pooled += r * r;
            }
          }
          warm[wi] = held;
          has_warm[wi] = true;
        }
        total += binomial ? pooled / h : std::sqrt(pooled / h);
      }
      const double value = total / plan.repeats;
      if (li == 0 || value < best_value) {
        best_value = value;
        best_lambda = li;
      }
    }
  }

  const PenaltySpec opt{alpha_opt,
                        lambda_grid_desc[static_cast<std::size_t>(best_lambda)]};
  ReweightResult out;
  out.lambda_upd = opt.lambda;
  Coefficients final;
  if (binomial) {
    final = fit_on_subset_logistic(data, rows, opt, plan.solver, phi)
                .search_frame_coefficients();
  } else {
    final = fit_on_subset_linear(data, rows, opt, plan.solver)
                .search_frame_coefficients();
  }
  out.beta = std::move(final.beta);
  out.intercept = final.intercept;
  return out;
}

}  // namespace enetlts
