#include "enetlts/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "enetlts/errors.hpp"

namespace enetlts {
namespace {

// Columns whose (weighted) mean square falls below this are treated as
// having no mass on the fit rows; their coefficients stay at zero. Healthy
// standardized columns sit near 1, degenerate ones near 1e-30.
constexpr double kZeroMass = 1e-20;

double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

double penalty_value(const Eigen::VectorXd& beta, double alpha) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double b = beta[j];
    acc += (1.0 - alpha) * 0.5 * b * b + alpha * std::abs(b);
  }
  return acc;
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double deviance(double score, int y) {
  return softplus(y == 1 ? -score : score);
}

double sigmoid(double score) {
  if (score >= 0.0) {
    return 1.0 / (1.0 + std::exp(-score));
  }
  const double e = std::exp(score);
  return e / (1.0 + e);
}

double gaussian_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double intercept,
                          const PenaltySpec& spec) {
  const double m = static_cast<double>(X.rows());
  const double rss = (y.array() - intercept - (X * beta).array()).square().sum();
  return rss / (2.0 * m) + spec.lambda * penalty_value(beta, spec.alpha);
}

double binomial_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, double intercept,
                          const PenaltySpec& spec) {
  const double m = static_cast<double>(X.rows());
  const Eigen::VectorXd s = (X * beta).array() + intercept;
  double dev = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    dev += deviance(s[i], static_cast<int>(y[i]));
  }
  return dev / m + spec.lambda * penalty_value(beta, spec.alpha);
}

namespace {

// One coordinate sweep of the (optionally weighted) elastic net problem.
// r is kept equal to z - intercept - X*beta throughout. Returns the largest
// coefficient (or intercept) move.
struct SweepState {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd* w;   // nullptr for unweighted
  double wsum;                // sum of weights (m if unweighted)
  Eigen::VectorXd& beta;
  double& intercept;
  Eigen::VectorXd& r;
  const Eigen::VectorXd& v;   // (1/m) sum w x_j^2 per column
  double m;
  double thresh;              // lambda * alpha
  double ridge;               // lambda * (1 - alpha)
};

double sweep(SweepState& st, const std::vector<int>* active) {
  double maxd = 0.0;
  // Unpenalized intercept first: exact coordinate minimizer.
  double d0;
  if (st.w != nullptr) {
    d0 = st.w->dot(st.r) / st.wsum;
  } else {
    d0 = st.r.mean();
  }
  st.intercept += d0;
  st.r.array() -= d0;
  maxd = std::abs(d0);
  const int p = static_cast<int>(st.X.cols());
  const auto update = [&](int j) {
    if (st.v[j] <= kZeroMass) {
      st.beta[j] = 0.0;
      return;
    }
    double grad;
    if (st.w != nullptr) {
      grad = st.X.col(j).cwiseProduct(*st.w).dot(st.r) / st.m;
    } else {
      grad = st.X.col(j).dot(st.r) / st.m;
    }
    const double z = grad + st.v[j] * st.beta[j];
    const double bn = soft_threshold(z, st.thresh) / (st.v[j] + st.ridge);
    const double d = bn - st.beta[j];
    if (d != 0.0) {
      st.r -= d * st.X.col(j);
      st.beta[j] = bn;
      const double ad = std::abs(d);
      if (ad > maxd) maxd = ad;
    }
  };
  if (active != nullptr) {
    for (int j : *active) update(j);
  } else {
    for (int j = 0; j < p; ++j) update(j);
  }
  return maxd;
}

// Full cyclic pass, then active-set passes until stable, then a full pass to
// confirm; repeats until a full pass moves nothing beyond tol.
void cd_loop(SweepState& st, const SolverControl& ctrl, long& passes,
             std::vector<double>* trace,
             const std::function<double()>& objective) {
  for (;;) {
    if (passes >= ctrl.max_cd_passes) {
      throw NoConvergence("coordinate descent: pass budget exhausted (" +
                          std::to_string(ctrl.max_cd_passes) + ")");
    }
    const double md_full = sweep(st, nullptr);
    ++passes;
    if (trace != nullptr) trace->push_back(objective());
    if (md_full < ctrl.coord_tol) return;
    std::vector<int> active;
    for (int j = 0; j < st.beta.size(); ++j) {
      if (st.beta[j] != 0.0) active.push_back(j);
    }
    for (;;) {
      if (passes >= ctrl.max_cd_passes) {
        throw NoConvergence("coordinate descent: pass budget exhausted (" +
                            std::to_string(ctrl.max_cd_passes) + ")");
      }
      const double md = sweep(st, &active);
      ++passes;
      if (trace != nullptr) trace->push_back(objective());
      if (md < ctrl.coord_tol) break;
    }
  }
}

}  // namespace

FitResult fit_gaussian(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const PenaltySpec& spec, const Eigen::VectorXd* warm,
                       const SolverControl& ctrl) {
  const int p = static_cast<int>(X.cols());
  const double m = static_cast<double>(X.rows());
  FitResult res;
  res.beta = warm != nullptr ? *warm : Eigen::VectorXd::Zero(p);
  Eigen::VectorXd v(p);
  for (int j = 0; j < p; ++j) v[j] = X.col(j).squaredNorm() / m;
  for (int j = 0; j < p; ++j) {
    if (v[j] <= kZeroMass) res.beta[j] = 0.0;
  }
  res.intercept = 0.0;
  Eigen::VectorXd r = y - X * res.beta;
  SweepState st{X,   nullptr,       m, res.beta, res.intercept, r, v,
                m,   spec.lambda * spec.alpha, spec.lambda * (1.0 - spec.alpha)};
  std::vector<double>* trace = ctrl.record_trace ? &res.objective_trace : nullptr;
  auto obj = [&]() { return gaussian_objective(X, y, res.beta, res.intercept, spec); };
  cd_loop(st, ctrl, res.cd_passes, trace, obj);
  return res;
}

FitResult fit_binomial(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const PenaltySpec& spec, const Eigen::VectorXd* warm,
                       const SolverControl& ctrl) {
  const int p = static_cast<int>(X.cols());
  const int m_i = static_cast<int>(X.rows());
  const double m = static_cast<double>(m_i);
  const double ybar = y.mean();
  if (ybar <= 0.0 || ybar >= 1.0) {
    throw ValidationError("fit_binomial: both classes must be present");
  }
  FitResult res;
  res.beta = warm != nullptr ? *warm : Eigen::VectorXd::Zero(p);
  res.intercept = std::log(ybar / (1.0 - ybar));

  double obj = binomial_objective(X, y, res.beta, res.intercept, spec);
  if (ctrl.record_trace) res.objective_trace.push_back(obj);

  Eigen::VectorXd w(m_i), z(m_i), r(m_i), v(p);
  for (int iter = 0; iter < ctrl.max_irls_iters; ++iter) {
    res.irls_iters = iter + 1;
    const Eigen::VectorXd s = (X * res.beta).array() + res.intercept;
    bool any_weight = false;
    for (int i = 0; i < m_i; ++i) {
      double pi = sigmoid(s[i]);
      pi = std::clamp(pi, ctrl.prob_clamp, 1.0 - ctrl.prob_clamp);
      w[i] = pi * (1.0 - pi);
      if (w[i] >= 1e-10) any_weight = true;
      z[i] = s[i] + (y[i] - pi) / w[i];
    }
    if (!any_weight) {
      throw DegenerateWeights("fit_binomial: all IRLS weights below 1e-10");
    }
    for (int j = 0; j < p; ++j) {
      v[j] = X.col(j).cwiseAbs2().dot(w) / m;
    }
    const Eigen::VectorXd beta_prev = res.beta;
    const double intercept_prev = res.intercept;
    r = z - X * res.beta;
    r.array() -= res.intercept;
    const double wsum = w.sum();
    SweepState st{X,   &w,           wsum, res.beta, res.intercept, r, v,
                  m,   spec.lambda * spec.alpha, spec.lambda * (1.0 - spec.alpha)};
    cd_loop(st, ctrl, res.cd_passes, nullptr, {});

    // Step-halve toward the previous iterate if the true objective rose.
    double obj_new = binomial_objective(X, y, res.beta, res.intercept, spec);
    const double slack = 1e-12 * (1.0 + std::abs(obj));
    if (obj_new > obj + slack) {
      Eigen::VectorXd dir = res.beta - beta_prev;
      const double dir0 = res.intercept - intercept_prev;
      double t = 1.0;
      bool improved = false;
      for (int halving = 0; halving < 30; ++halving) {
        t *= 0.5;
        const Eigen::VectorXd cand = beta_prev + t * dir;
        const double cand0 = intercept_prev + t * dir0;
        const double cand_obj = binomial_objective(X, y, cand, cand0, spec);
        if (cand_obj <= obj + slack) {
          res.beta = cand;
          res.intercept = cand0;
          obj_new = cand_obj;
          improved = true;
          break;
        }
      }
      if (!improved) {
        // No descent available along this direction; keep the previous point.
        res.beta = beta_prev;
        res.intercept = intercept_prev;
        if (ctrl.record_trace) res.objective_trace.push_back(obj);
        return res;
      }
    }
    obj = obj_new;
    if (ctrl.record_trace) res.objective_trace.push_back(obj);

    double maxd = std::abs(res.intercept - intercept_prev);
    for (int j = 0; j < p; ++j) {
      maxd = std::max(maxd, std::abs(res.beta[j] - beta_prev[j]));
    }
    if (maxd < ctrl.coord_tol) return res;
  }
  throw NoConvergence("fit_binomial: IRLS iteration cap (" +
                      std::to_string(ctrl.max_irls_iters) + ") reached");
}

}  // namespace enetlts
