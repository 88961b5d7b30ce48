#pragma once

#include <Eigen/Core>
#include <vector>

namespace enetlts {

struct PenaltySpec {
  double alpha = 1.0;   // l1/l2 mixing, in [0, 1]
  double lambda = 0.0;  // >= 0
};

struct SolverControl {
  double coord_tol = 1e-7;     // max coefficient change per sweep
  long max_cd_passes = 100000;  // total coordinate sweeps
  int max_irls_iters = 50;
  double prob_clamp = 1e-5;  // probabilities clamped to [clamp, 1-clamp]
  bool record_trace = false; // fill FitResult::objective_trace
};

/// Elastic net penalty sum_j [(1-alpha)/2 beta_j^2 + alpha |beta_j|].
double penalty_value(const Eigen::VectorXd& beta, double alpha);

/// sign(z) * max(|z| - gamma, 0).
double soft_threshold(double z, double gamma);

/// Logistic deviance -y*score + log(1 + e^score), overflow-safe.
/// Implemented so that deviance(s, 1) and deviance(-s, 0) are bit-identical.
double deviance(double score, int y);

double sigmoid(double score);

struct FitResult {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  long cd_passes = 0;
  int irls_iters = 0;
  std::vector<double> objective_trace;  // per sweep / per IRLS step
};

/// Minimize (1/(2m)) sum_i (y_i - b0 - x_i'beta)^2 + lambda * P_alpha(beta)
/// by cyclic coordinate descent with an active-set inner loop. The intercept
/// is never penalized. Columns with (numerically) zero mass are pinned at 0.
FitResult fit_gaussian(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const PenaltySpec& spec, const Eigen::VectorXd* warm,
                       const SolverControl& ctrl);

/// Minimize (1/m) sum_i d(b0 + x_i'beta, y_i) + lambda * P_alpha(beta) by
/// IRLS with penalized weighted coordinate descent inner solves; outer steps
/// are step-halved so the objective never increases.
FitResult fit_binomial(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const PenaltySpec& spec, const Eigen::VectorXd* warm,
                       const SolverControl& ctrl);

double gaussian_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double intercept,
                          const PenaltySpec& spec);
double binomial_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double intercept,
                          const PenaltySpec& spec);

}  // namespace enetlts
