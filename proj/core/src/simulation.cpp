#include "enetlts/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "enetlts/errors.hpp"
#include "enetlts/parallel.hpp"
#include "enetlts/rng.hpp"
#include "enetlts/stats.hpp"

namespace enetlts {
namespace {

std::vector<int> split_blocks(int p, const std::vector<double>& fractions) {
  std::vector<int> sizes;
  int used = 0;
  for (std::size_t b = 0; b + 1 < fractions.size(); ++b) {
    const int s = std::max(1, static_cast<int>(std::lround(fractions[b] * p)));
    sizes.push_back(s);
    used += s;
  }
  if (used >= p) throw ValidationError("sim scheme: p too small for block layout");
  sizes.push_back(p - used);
  return sizes;
}

int informative_count(const SimScheme& scheme) {
  int k = 0;
  for (std::size_t b = 0; b + 1 < scheme.block_sizes.size(); ++b) {
    k += scheme.block_sizes[b];
  }
  return k;
}

/// One row of blockwise AR(1) normals: x_1 = z_1, x_j = rho x_{j-1} +
/// sqrt(1-rho^2) z_j, which realizes Sigma_jk = rho^|j-k| exactly.
void draw_row(Eigen::MatrixXd& X, int row, const SimScheme& scheme, Rng& rng) {
  int col = 0;
  for (std::size_t b = 0; b < scheme.block_sizes.size(); ++b) {
    const int size = scheme.block_sizes[b];
    const double rho = scheme.block_rhos[b];
    const double noise = std::sqrt(1.0 - rho * rho);
    double prev = 0.0;
    for (int j = 0; j < size; ++j, ++col) {
      const double z = rng.normal();
      const double x = j == 0 ? z : rho * prev + noise * z;
      X(row, col) = x;
      prev = x;
    }
  }
}

Eigen::MatrixXd draw_matrix(int n, const SimScheme& scheme, Rng& rng) {
  Eigen::MatrixXd X(n, scheme.p);
  for (int i = 0; i < n; ++i) draw_row(X, i, scheme, rng);
  return X;
}

void check_scheme(const SimScheme& scheme) {
  int total = 0;
  for (int s : scheme.block_sizes) total += s;
  if (total != scheme.p || scheme.block_sizes.size() != scheme.block_rhos.size()) {
    throw ValidationError("sim scheme: block layout inconsistent with p");
  }
  for (double r : scheme.block_rhos) {
    if (!(r > -1.0 && r < 1.0)) {
      throw ValidationError("sim scheme: block rho must be in (-1, 1)");
    }
  }
  if (!(scheme.contamination_rate >= 0.0 && scheme.contamination_rate < 0.5)) {
    throw ValidationError("sim scheme: contamination rate must be in [0, 0.5)");
  }
}

}  // namespace

SimScheme linear_scheme(int n, int p) {
  SimScheme s;
  s.n = n;
  s.p = p;
  s.family = Family::Gaussian;
  s.block_sizes = split_blocks(p, {0.05, 0.05, 0.9});
  s.block_rhos = {0.9, 0.9, 0.2};
  return s;
}

SimScheme logistic_scheme(int n, int p) {
  SimScheme s;
  s.n = n;
  s.p = p;
  s.family = Family::Binomial;
  s.block_sizes = split_blocks(p, {0.1, 0.9});
  s.block_rhos = {0.9, 0.5};
  return s;
}

GeneratedData gen_linear(const SimScheme& scheme, std::uint64_t replication) {
  check_scheme(scheme);
  if (scheme.family != Family::Gaussian) {
    throw ValidationError("gen_linear: scheme family must be gaussian");
  }
  const int n = scheme.n;
  const int test_n = scheme.test_n > 0 ? scheme.test_n : n;
  const int k_inf = informative_count(scheme);

  GeneratedData out;
  out.intercept_true = scheme.intercept_true;
  out.beta_true = Eigen::VectorXd::Zero(scheme.p);
  out.beta_true.head(k_inf).setOnes();

  const Rng base(scheme.seed);
  Rng rng = base.substream(StreamPurpose::SimTrain, {replication});
  out.train.family = Family::Gaussian;
  out.train.X = draw_matrix(n, scheme, rng);
  out.train.y.resize(n);
  for (int i = 0; i < n; ++i) {
    out.train.y[i] = scheme.intercept_true +
                     out.train.X.row(i).dot(out.beta_true) + rng.normal();
  }
  if (scheme.contamination_rate > 0.0) {
    const double sd_clean = sample_sd(out.train.y);
    const int n_out =
        static_cast<int>(std::ceil(scheme.contamination_rate * n));
    for (int i = 0; i < n_out; ++i) {
      for (int j = 0; j < k_inf; ++j) {
        out.train.X(i, j) = 20.0 + rng.normal();
      }
      out.train.y[i] = scheme.intercept_true +
                       out.train.X.row(i).dot(out.beta_true) +
                       (20.0 * sd_clean + rng.normal());
      out.contaminated_rows.push_back(i);
    }
  }

  Rng trng = base.substream(StreamPurpose::SimTest, {replication});
  out.test.family = Family::Gaussian;
  out.test.X = draw_matrix(test_n, scheme, trng);
  out.test.y.resize(test_n);
  for (int i = 0; i < test_n; ++i) {
    out.test.y[i] = scheme.intercept_true + out.test.X.row(i).dot(out.beta_true) +
                    trng.normal();
  }
  return out;
}

GeneratedData gen_logistic(const SimScheme& scheme, std::uint64_t replication) {
  check_scheme(scheme);
  if (scheme.family != Family::Binomial) {
    throw ValidationError("gen_logistic: scheme family must be binomial");
  }
  const int n = scheme.n;
  const int test_n = scheme.test_n > 0 ? scheme.test_n : n;
  const int k_inf = informative_count(scheme);

  GeneratedData out;
  out.intercept_true = scheme.intercept_true;
  out.beta_true = Eigen::VectorXd::Zero(scheme.p);
  out.beta_true.head(k_inf).setOnes();

  const Rng base(scheme.seed);
  auto draw_labelled = [&](int rows, StreamPurpose purpose) {
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
      Rng rng = base.substream(purpose, {replication, attempt});
      Dataset d;
      d.family = Family::Binomial;
      d.X = draw_matrix(rows, scheme, rng);
      d.y.resize(rows);
      int n1 = 0;
      for (int i = 0; i < rows; ++i) {
        const double latent = scheme.intercept_true +
                              d.X.row(i).dot(out.beta_true) + rng.normal();
        d.y[i] = latent > 0.0 ? 1.0 : 0.0;
        n1 += d.y[i] > 0.5 ? 1 : 0;
      }
      if (n1 >= 2 && rows - n1 >= 2) return std::make_pair(d, rng);
    }
    throw DegenerateSample("gen_logistic: could not draw both classes");
  };

  auto [train, rng] = draw_labelled(n, StreamPurpose::SimTrain);
  out.train = std::move(train);
  if (scheme.contamination_rate > 0.0) {
    const int n0 = out.train.count_class(0);
    const int flips = static_cast<int>(
        std::floor(scheme.contamination_rate * static_cast<double>(n0)));
    int done = 0;
    for (int i = 0; i < n && done < flips; ++i) {
      if (out.train.y[i] != 0.0) continue;
      for (int j = 0; j < k_inf; ++j) {
        out.train.X(i, j) = 20.0 + rng.normal();
      }
      out.train.y[i] = 1.0;
      out.contaminated_rows.push_back(i);
      ++done;
    }
    if (out.train.count_class(0) < 2) {
      throw DegenerateSample("gen_logistic: contamination emptied class 0");
    }
  }
  out.test = draw_labelled(test_n, StreamPurpose::SimTest).first;
  return out;
}

double metric_rmspe(const Eigen::VectorXd& beta_hat, double intercept_hat,
                    const Dataset& test) {
  const double n = static_cast<double>(test.n());
  const double ss =
      (test.y.array() - intercept_hat - (test.X * beta_hat).array()).square().sum();
  return std::sqrt(ss / n);
}

double metric_mnll(const Eigen::VectorXd& beta_hat, double intercept_hat,
                   const Dataset& test) {
  const Eigen::VectorXd s = ((test.X * beta_hat).array() + intercept_hat).matrix();
  double acc = 0.0;
  for (int i = 0; i < test.n(); ++i) {
    acc += deviance(s[i], static_cast<int>(test.y[i]));
  }
  return acc / static_cast<double>(test.n());
}

double metric_mcr(const Eigen::VectorXd& beta_hat, double intercept_hat,
                  const Dataset& test) {
  const Eigen::VectorXd s = ((test.X * beta_hat).array() + intercept_hat).matrix();
  int wrong = 0;
  for (int i = 0; i < test.n(); ++i) {
    const int label = s[i] > 0.0 ? 1 : 0;  // pi > 0.5 iff score > 0
    wrong += label != static_cast<int>(test.y[i]) ? 1 : 0;
  }
  return static_cast<double>(wrong) / static_cast<double>(test.n());
}

double metric_precision(const Eigen::VectorXd& beta_hat, double intercept_hat,
                        const Eigen::VectorXd& beta_true, double intercept_true) {
  const double d0 = intercept_true - intercept_hat;
  return std::sqrt(d0 * d0 + (beta_true - beta_hat).squaredNorm());
}

FprFnr metric_fpr_fnr(const Eigen::VectorXd& beta_hat, double intercept_hat,
                      const Eigen::VectorXd& beta_true, double intercept_true) {
  int fp = 0, fn = 0, zeros = 0, nonzeros = 0;
  auto tally = [&](double truth, double est) {
    if (truth == 0.0) {
      ++zeros;
      if (est != 0.0) ++fp;
    } else {
      ++nonzeros;
      if (est == 0.0) ++fn;
    }
  };
  tally(intercept_true, intercept_hat);
  for (Eigen::Index j = 0; j < beta_true.size(); ++j) {
    tally(beta_true[j], beta_hat[j]);
  }
  FprFnr out;
  out.fpr = zeros > 0 ? static_cast<double>(fp) / zeros : 0.0;
  out.fnr = nonzeros > 0 ? static_cast<double>(fn) / nonzeros : 0.0;
  return out;
}

std::string estimator_name(Estimator est) {
  switch (est) {
    case Estimator::Enet:
      return "enet";
    case Estimator::EnetLtsRaw:
      return "enet-lts-raw";
    case Estimator::EnetLtsReweighted:
      return "enet-lts";
  }
  return "unknown";
}

std::vector<MetricsRow> run_study(const SimScheme& scheme, const StudyOptions& opt) {
  struct RepResult {
    std::vector<MetricsRow> rows;
  };
  std::vector<RepResult> results(static_cast<std::size_t>(opt.replications));
  parallel_for(opt.replications, opt.threads, [&](int rep) {
    auto& rows = results[static_cast<std::size_t>(rep)].rows;
    const GeneratedData gen =
        scheme.family == Family::Gaussian
            ? gen_linear(scheme, static_cast<std::uint64_t>(rep))
            : gen_logistic(scheme, static_cast<std::uint64_t>(rep));
    // One enet-LTS fit serves both the raw and the reweighted estimator.
    const bool need_lts =
        std::find(opt.estimators.begin(), opt.estimators.end(),
                  Estimator::EnetLtsRaw) != opt.estimators.end() ||
        std::find(opt.estimators.begin(), opt.estimators.end(),
                  Estimator::EnetLtsReweighted) != opt.estimators.end();
    FitConfig cfg = opt.fit;
    cfg.seed = Rng(scheme.seed, {static_cast<std::uint64_t>(StreamPurpose::Study),
                                 static_cast<std::uint64_t>(rep)})
                   .next_u64();
    cfg.threads = 1;  // parallelism lives at the replication level

    ModelFit lts, classic;
    bool lts_ok = false, classic_ok = false;
    std::string lts_error, classic_error;
    if (need_lts) {
      try {
        lts = fit_enet_lts(gen.train, cfg);
        lts_ok = true;
      } catch (const std::exception& e) {
        lts_error = e.what();
      }
    }
    if (std::find(opt.estimators.begin(), opt.estimators.end(),
                  Estimator::Enet) != opt.estimators.end()) {
      try {
        classic = fit_enet_classic(gen.train, cfg);
        classic_ok = true;
      } catch (const std::exception& e) {
        classic_error = e.what();
      }
    }

    for (Estimator est : opt.estimators) {
      const bool reweighted = est != Estimator::EnetLtsRaw;
      const ModelFit* fit = nullptr;
      bool ok = false;
      if (est == Estimator::Enet) {
        fit = &classic;
        ok = classic_ok;
      } else {
        fit = &lts;
        ok = lts_ok;
      }
      if (!ok) {
        rows.push_back({rep, estimator_name(est), "failed", 1.0});
        continue;
      }
      const Eigen::VectorXd& beta = reweighted ? fit->beta_rew : fit->beta_raw;
      const double b0 = reweighted ? fit->intercept_rew : fit->intercept_raw;
      if (scheme.family == Family::Gaussian) {
        rows.push_back({rep, estimator_name(est), "rmspe",
                        metric_rmspe(beta, b0, gen.test)});
      } else {
        rows.push_back({rep, estimator_name(est), "mnll",
                        metric_mnll(beta, b0, gen.test)});
        rows.push_back(
            {rep, estimator_name(est), "mcr", metric_mcr(beta, b0, gen.test)});
      }
      rows.push_back({rep, estimator_name(est), "precision",
                      metric_precision(beta, b0, gen.beta_true,
                                       gen.intercept_true)});
      const FprFnr rates =
          metric_fpr_fnr(beta, b0, gen.beta_true, gen.intercept_true);
      rows.push_back({rep, estimator_name(est), "fpr", rates.fpr});
      rows.push_back({rep, estimator_name(est), "fnr", rates.fnr});
    }
  });
  std::vector<MetricsRow> table;
  for (auto& r : results) {
    table.insert(table.end(), r.rows.begin(), r.rows.end());
  }
  return table;
}

}  // namespace enetlts
