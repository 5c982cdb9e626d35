#pragma once

#include "trobust/linalg.hpp"

#include <cstdint>
#include <random>

namespace trobust::fixtures {

/// Intercept design with k standard-normal regressors and normal responses.
inline linalg::RegressionData random_design(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  linalg::MatrixXd Z(n, k);
  linalg::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) Z(i, j) = normal(rng);
    y(i) = normal(rng);
  }
  return linalg::RegressionData::with_intercept(y, Z);
}

/// Simple regression y on x with an intercept.
inline linalg::RegressionData line_data(std::initializer_list<double> x, std::initializer_list<double> y) {
  linalg::MatrixXd Z(static_cast<Eigen::Index>(x.size()), 1);
  linalg::VectorXd v(static_cast<Eigen::Index>(y.size()));
  Eigen::Index i = 0;
  for (double xi : x) Z(i++, 0) = xi;
  i = 0;
  for (double yi : y) v(i++) = yi;
  return linalg::RegressionData::with_intercept(v, Z);
}

}  // namespace trobust::fixtures
