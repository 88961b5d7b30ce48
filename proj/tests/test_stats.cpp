#include <doctest.h>

#include <cmath>

#include "enetlts/stats.hpp"

using namespace enetlts;

namespace {

// Independent oracle for the normal quantile: bisection on the CDF, which is
// itself a thin erfc wrapper and shares nothing with the Acklam path.
double quantile_oracle(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (standard_normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("median handles odd and even lengths") {
  CHECK(median(vec({3, 1, 2})) == 2.0);
  CHECK(median(vec({4, 1, 2, 3})) == 2.5);
  CHECK(median(vec({5})) == 5.0);
}

TEST_CASE("mad carries the 1.4826 consistency factor") {
  CHECK(mad(vec({1, 2, 3, 4, 5})) == doctest::Approx(1.4826).epsilon(1e-12));
  CHECK(mad(vec({7, 7, 7, 7})) == 0.0);
}

TEST_CASE("normal quantile matches the bisection oracle") {
  for (double p : {0.001, 0.0125, 0.1, 0.25, 0.5, 0.75, 0.9, 0.9875, 0.999}) {
    CHECK(standard_normal_quantile(p) ==
          doctest::Approx(quantile_oracle(p)).epsilon(1e-10));
  }
  // The outlier-flagging threshold used throughout.
  CHECK(standard_normal_quantile(1.0 - 0.0125) ==
        doctest::Approx(2.2414).epsilon(1e-4));
}

TEST_CASE("quantile and cdf invert each other") {
  for (double x : {-3.0, -1.0, -0.1, 0.0, 0.5, 2.0, 4.0}) {
    CHECK(standard_normal_quantile(standard_normal_cdf(x)) ==
          doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("pearson correlation basics") {
  const auto x = vec({1, 2, 3, 4});
  CHECK(pearson_correlation(x, x) == doctest::Approx(1.0));
  CHECK(pearson_correlation(x, vec({-1, -2, -3, -4})) == doctest::Approx(-1.0));
  CHECK(pearson_correlation(x, vec({2, 2, 2, 2})) == 0.0);
}

TEST_CASE("winsorize clamps symmetrically") {
  const auto w = winsorize(vec({-5, -1, 0, 1, 5}), 2.0);
  CHECK(w[0] == -2.0);
  CHECK(w[1] == -1.0);
  CHECK(w[4] == 2.0);
}

}  // TEST_SUITE
