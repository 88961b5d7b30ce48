#pragma once

#include <Eigen/Core>

namespace enetlts {

/// Normal-consistency factor applied to the MAD throughout the library.
inline constexpr double kMadConsistency = 1.4826;

double median(Eigen::VectorXd values);  // by value: sorted in place
/// Median absolute deviation about the median, scaled by kMadConsistency.
double mad(const Eigen::VectorXd& values);

double standard_normal_pdf(double x);
double standard_normal_cdf(double x);
/// Inverse standard normal CDF (Acklam's approximation plus one Halley step).
double standard_normal_quantile(double p);

/// Pearson correlation; returns 0 when either argument has zero variance.
double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Componentwise clamp to [-cutoff, cutoff].
Eigen::VectorXd winsorize(const Eigen::VectorXd& v, double cutoff);

double sample_sd(const Eigen::VectorXd& v);  // divisor (n - 1)

}  // namespace enetlts
