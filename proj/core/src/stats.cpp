#include "enetlts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace enetlts {

double median(Eigen::VectorXd values) {
  const auto n = values.size();
  if (n == 0) throw std::invalid_argument("median: empty input");
  double* begin = values.data();
  double* end = begin + n;
  double* mid = begin + n / 2;
  std::nth_element(begin, mid, end);
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  std::nth_element(begin, mid - 1, mid);
  return 0.5 * (*(mid - 1) + upper);
}

double mad(const Eigen::VectorXd& values) {
  const double med = median(values);
  Eigen::VectorXd dev = (values.array() - med).abs();
  return kMadConsistency * median(std::move(dev));
}

double standard_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("standard_normal_quantile: p must be in (0,1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement against erfc brings the result to ~1 ulp.
  const double e = standard_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("pearson_correlation: size mismatch");
  }
  const double ma = a.mean();
  const double mb = b.mean();
  const Eigen::ArrayXd da = a.array() - ma;
  const Eigen::ArrayXd db = b.array() - mb;
  const double va = (da * da).sum();
  const double vb = (db * db).sum();
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return (da * db).sum() / std::sqrt(va * vb);
}

Eigen::VectorXd winsorize(const Eigen::VectorXd& v, double cutoff) {
  return v.array().min(cutoff).max(-cutoff).matrix();
}

double sample_sd(const Eigen::VectorXd& v) {
  const auto n = v.size();
  if (n < 2) throw std::invalid_argument("sample_sd: need at least 2 values");
  const double m = v.mean();
  const double ss = (v.array() - m).square().sum();
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace enetlts
