#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enetlts/data.hpp"
#include "enetlts/workflow.hpp"

namespace enetlts {

/// Block-correlated sampling design with optional contamination. Predictors
/// are drawn blockwise from zero-mean AR(1) normals (Sigma_jk = rho^|j-k|);
/// the true coefficient vector is 1 on the informative block(s) and 0
/// elsewhere, with intercept 1.
struct SimScheme {
  int n = 150;
  int p = 60;
  Family family = Family::Gaussian;
  std::vector<int> block_sizes;    // (pa1, pa2, pb) gaussian, (pa, pb) binomial
  std::vector<double> block_rhos;  // per-block AR parameter
  double contamination_rate = 0.0;
  double intercept_true = 1.0;
  std::uint64_t seed = 1;
  int test_n = 0;  // 0: same as n
};

/// Gaussian design: blocks (0.05p, 0.05p, 0.9p) with rhos (0.9, 0.9, 0.2).
SimScheme linear_scheme(int n, int p);
/// Binomial design: blocks (0.1p, 0.9p) with rhos (0.9, 0.5).
SimScheme logistic_scheme(int n, int p);

struct GeneratedData {
  Dataset train;
  Dataset test;  // always drawn clean
  Eigen::VectorXd beta_true;
  double intercept_true = 1.0;
  std::vector<int> contaminated_rows;
};

/// y = 1 + x'beta + eps, eps ~ N(0,1). Contamination replaces the informative
/// entries of the first ceil(rate*n) rows by N(20,1) draws and their errors
/// by N(20*sd(y_clean), 1).
GeneratedData gen_linear(const SimScheme& scheme, std::uint64_t replication = 0);

/// y = 1{1 + x'beta + eps > 0}. Contamination replaces the informative
/// entries of the first floor(0.1*n0) class-0 rows by N(20,1) draws and
/// flips their labels.
GeneratedData gen_logistic(const SimScheme& scheme, std::uint64_t replication = 0);

double metric_rmspe(const Eigen::VectorXd& beta_hat, double intercept_hat,
                    const Dataset& test);
double metric_mnll(const Eigen::VectorXd& beta_hat, double intercept_hat,
                   const Dataset& test);
double metric_mcr(const Eigen::VectorXd& beta_hat, double intercept_hat,
                  const Dataset& test);
/// sqrt(sum_{j=0..p} (beta_j - beta_hat_j)^2), intercept included as j = 0.
double metric_precision(const Eigen::VectorXd& beta_hat, double intercept_hat,
                        const Eigen::VectorXd& beta_true, double intercept_true);
/// Support errors over j = 0..p (intercept included); nonzero test is exact.
struct FprFnr {
  double fpr = 0.0;
  double fnr = 0.0;
};
FprFnr metric_fpr_fnr(const Eigen::VectorXd& beta_hat, double intercept_hat,
                      const Eigen::VectorXd& beta_true, double intercept_true);

enum class Estimator { Enet, EnetLtsRaw, EnetLtsReweighted };
std::string estimator_name(Estimator est);

struct MetricsRow {
  int replication = 0;
  std::string estimator;
  std::string metric;
  double value = 0.0;
};

struct StudyOptions {
  int replications = 100;
  std::vector<Estimator> estimators = {Estimator::Enet, Estimator::EnetLtsRaw,
                                       Estimator::EnetLtsReweighted};
  FitConfig fit;    // per-replication fit settings; seeds derived internally
  int threads = 1;  // across replications
};

/// Fresh train/test per replication, every estimator fit and scored on the
/// clean test set; one row per (replication, estimator, metric). Failed fits
/// produce a single "failed" row instead of metric rows.
std::vector<MetricsRow> run_study(const SimScheme& scheme, const StudyOptions& opt);

}  // namespace enetlts
