#include "trobust/linalg.hpp"

#include "trobust/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace trobust::linalg {

namespace {

void require_index(std::size_t index, std::size_t n) {
  if (index >= n) {
    throw IndexOutOfRangeError("observation index " + std::to_string(index) +
                               " out of range for n = " + std::to_string(n));
  }
}

}  // namespace

RegressionData::RegressionData(VectorXd y, MatrixXd X) : y_(std::move(y)), X_(std::move(X)) {
  if (X_.cols() < 1) throw PreconditionError("design matrix needs an intercept column");
  if (X_.rows() < 1) throw PreconditionError("design matrix has no rows");
  if (y_.size() != X_.rows()) {
    throw PreconditionError("response length " + std::to_string(y_.size()) +
                            " does not match design rows " + std::to_string(X_.rows()));
  }
  if (!y_.allFinite() || !X_.allFinite()) throw PreconditionError("non-finite entry in regression data");
  if ((X_.col(0).array() != 1.0).any()) throw PreconditionError("first design column must be all ones");
}

RegressionData RegressionData::with_intercept(VectorXd y, const MatrixXd& regressors) {
  MatrixXd X(regressors.rows(), regressors.cols() + 1);
  X.col(0).setOnes();
  X.rightCols(regressors.cols()) = regressors;
  return RegressionData(std::move(y), std::move(X));
}

RegressionData RegressionData::with_response(std::size_t index, double value) const {
  require_index(index, n());
  VectorXd y = y_;
  y(static_cast<Eigen::Index>(index)) = value;
  return RegressionData(std::move(y), X_);
}

RegressionData RegressionData::without_row(std::size_t index) const {
  require_index(index, n());
  const auto rows = X_.rows();
  const auto i = static_cast<Eigen::Index>(index);
  VectorXd y(rows - 1);
  MatrixXd X(rows - 1, X_.cols());
  y << y_.head(i), y_.tail(rows - i - 1);
  X << X_.topRows(i), X_.bottomRows(rows - i - 1);
  return RegressionData(std::move(y), std::move(X));
}

RegressionData RegressionData::with_row_last(std::size_t index) const {
  require_index(index, n());
  const auto rows = X_.rows();
  const auto i = static_cast<Eigen::Index>(index);
  VectorXd y(rows);
  MatrixXd X(rows, X_.cols());
  y << y_.head(i), y_.tail(rows - i - 1), y_(i);
  X << X_.topRows(i), X_.bottomRows(rows - i - 1), X_.row(i);
  return RegressionData(std::move(y), std::move(X));
}

void RegressionData::require_estimable() const {
  if (n() <= p()) {
    throw SingularDesignError("need n > k+1 observations, got n = " + std::to_string(n()) +
                              ", k = " + std::to_string(k()));
  }
  const double cond = condition_number(X_.transpose() * X_);
  if (!(cond < kConditionLimit)) {
    throw SingularDesignError("design matrix is rank deficient (cond(X'X) = " + std::to_string(cond) + ")");
  }
}

bool RegressionData::operator==(const RegressionData& other) const {
  return y_.size() == other.y_.size() && X_.rows() == other.X_.rows() && X_.cols() == other.X_.cols() &&
         y_ == other.y_ && X_ == other.X_;
}

double condition_number(const MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

OlsFit ols_fit(const RegressionData& data) {
  data.require_estimable();
  Eigen::ColPivHouseholderQR<MatrixXd> qr(data.X());
  OlsFit fit;
  fit.beta_hat = qr.solve(data.y());
  fit.fitted = data.X() * fit.beta_hat;
  fit.residuals = data.y() - fit.fitted;
  return fit;
}

HatMatrix hat_matrix(const RegressionData& data) {
  data.require_estimable();
  const auto n = data.X().rows();
  const auto p = data.X().cols();
  Eigen::ColPivHouseholderQR<MatrixXd> qr(data.X());
  const MatrixXd Q1 = qr.householderQ() * MatrixXd::Identity(n, p);
  HatMatrix out;
  out.H = Q1 * Q1.transpose();
  out.H = 0.5 * (out.H + out.H.transpose()).eval();
  out.condition_number = condition_number(data.X().transpose() * data.X());
  return out;
}

HatMatrix hat_matrix_centered(const RegressionData& data) {
  const auto n = data.X().rows();
  if (data.n() <= data.p()) {
    throw SingularDesignError("need n > k+1 observations, got n = " + std::to_string(data.n()));
  }
  HatMatrix out;
  out.H = MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  if (data.k() == 0) return out;

  const MatrixXd R = data.regressors();
  const MatrixXd centered = R.rowwise() - R.colwise().mean();
  const MatrixXd scatter = centered.transpose() * centered;
  out.condition_number = condition_number(scatter);
  if (!(out.condition_number < kConditionLimit)) {
    throw DegenerateRegressorsError("centered regressor scatter is singular (cond = " +
                                    std::to_string(out.condition_number) + ")");
  }
  const MatrixXd solved = scatter.ldlt().solve(centered.transpose());
  out.H += centered * solved;
  out.H = 0.5 * (out.H + out.H.transpose()).eval();
  return out;
}

LeverageDecomposition leverage_decomposition(const RegressionData& data, std::size_t outlier_index) {
  require_index(outlier_index, data.n());
  const std::size_t n = data.n();
  const std::size_t k = data.k();
  if (n < k + 2) {
    throw PreconditionError("leverage decomposition needs n >= k+2, got n = " + std::to_string(n));
  }
  const MatrixXd R = data.with_row_last(outlier_index).regressors();
  const auto rest = static_cast<Eigen::Index>(n - 1);
  const double nd = static_cast<double>(n);

  const MatrixXd others = R.topRows(rest);
  const Eigen::RowVectorXd mean_others = others.colwise().mean();
  const Eigen::RowVectorXd mean_all = R.colwise().mean();
  const MatrixXd dev_others = others.rowwise() - mean_others;

  LeverageDecomposition out;
  out.W = dev_others.transpose() * dev_others;
  out.g = std::sqrt(nd - 1.0) * (mean_others - mean_all).transpose();
  out.h_nn_reconstructed = 1.0 / nd;

  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if (k == 0 || out.g.norm() <= 1e-12 * scale) return out;

  const MatrixXd M = out.W + nd * out.g * out.g.transpose();
  if (!(condition_number(M) < kConditionLimit)) {
    throw DegenerateConfigurationError("W + n g g' is singular");
  }
  out.h_nn_reconstructed += (nd - 1.0) * out.g.dot(M.ldlt().solve(out.g));
  return out;
}

ResidualSensitivities residual_sensitivities(const HatMatrix& hat, std::size_t outlier_index) {
  require_index(outlier_index, hat.n());
  const auto i = static_cast<Eigen::Index>(outlier_index);
  ResidualSensitivities out;
  out.d_e_out = 1.0 - hat.H(i, i);
  out.d_e_nonout.reserve(hat.n() - 1);
  for (Eigen::Index j = 0; j < hat.H.cols(); ++j) {
    if (j != i) out.d_e_nonout.push_back(-hat.H(i, j));
  }
  return out;
}

}  // namespace trobust::linalg
