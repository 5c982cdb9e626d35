#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace trobust::linalg {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::RowVectorXd;

/// X'X matrices with a condition number above this are treated as singular.
inline constexpr double kConditionLimit = 1e12;

/**
 * Response vector and design matrix of a linear model with intercept.
 *
 * Construction validates structure only: matching shapes, a leading column
 * of ones and finite entries. Estimability (n > k+1, full column rank) is
 * checked by the operations that need it, so degenerate configurations can
 * still be represented and diagnosed.
 */
class RegressionData {
 public:
  RegressionData(VectorXd y, MatrixXd X);

  /// Builds X = [1, regressors].
  static RegressionData with_intercept(VectorXd y, const MatrixXd& regressors);

  const VectorXd& y() const { return y_; }
  const MatrixXd& X() const { return X_; }
  std::size_t n() const { return static_cast<std::size_t>(X_.rows()); }
  std::size_t k() const { return static_cast<std::size_t>(X_.cols()) - 1; }
  std::size_t p() const { return static_cast<std::size_t>(X_.cols()); }

  /// Non-intercept columns.
  MatrixXd regressors() const { return X_.rightCols(X_.cols() - 1); }

  /// Copy with response `index` replaced.
  RegressionData with_response(std::size_t index, double value) const;
  /// Copy without row `index`.
  RegressionData without_row(std::size_t index) const;
  /// Copy with row `index` moved to the end, other rows in order.
  RegressionData with_row_last(std::size_t index) const;

  /// Throws SingularDesignError unless n > k+1 and X'X is well conditioned.
  void require_estimable() const;

  bool operator==(const RegressionData& other) const;

 private:
  VectorXd y_;
  MatrixXd X_;
};

struct OlsFit {
  VectorXd beta_hat;
  VectorXd residuals;
  VectorXd fitted;
};

struct HatMatrix {
  MatrixXd H;
  /// Condition number of the matrix inverted to build H.
  double condition_number = 1.0;

  std::size_t n() const { return static_cast<std::size_t>(H.rows()); }
};

/// Decomposition of an observation's leverage into the
/// scatter of the remaining rows and their mean shift.
struct LeverageDecomposition {
  MatrixXd W;  ///< scatter of the other rows about their own mean (k x k)
  VectorXd g;  ///< sqrt(n-1) * (mean of other rows - overall mean)
  double h_nn_reconstructed = 0.0;
};

struct ResidualSensitivities {
  double d_e_out = 0.0;
  std::vector<double> d_e_nonout;  ///< rows other than the outlier, file order
};

OlsFit ols_fit(const RegressionData& data);

/// H = X (X'X)^{-1} X', built from a pivoted QR of X.
HatMatrix hat_matrix(const RegressionData& data);

/// h_ij = 1/n + (x_i - xbar)' (Xc'Xc)^{-1} (x_j - xbar) with Xc the centered
/// regressors of all n rows.
HatMatrix hat_matrix_centered(const RegressionData& data);

LeverageDecomposition leverage_decomposition(const RegressionData& data,
                                             std::size_t outlier_index);

/// Derivatives of the OLS residuals with respect to the outlier's response.
ResidualSensitivities residual_sensitivities(const HatMatrix& hat,
                                             std::size_t outlier_index);

/// Ratio of extreme eigenvalues of a symmetric positive semi-definite matrix.
double condition_number(const MatrixXd& symmetric);

}  // namespace trobust::linalg
