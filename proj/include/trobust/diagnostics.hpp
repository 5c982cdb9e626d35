#pragma once

#include "trobust/linalg.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace trobust::diagnostics {

enum class Verdict { conflict_robust, leverage_point, insufficient_sample, no_conflict };

std::string_view to_string(Verdict verdict);

/// Conflict and robustness conditions for one designated outlier.
struct ConflictDiagnosis {
  std::size_t outlier_index = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double h_nn = 0.0;
  std::vector<double> h_row;  ///< h_nj for the other rows, in data order
  /// Stated sufficient form: every h_nj > 0.
  bool lemma1_sufficient = false;
  /// Exact per-row form: 1 - h_nn > -h_nj.
  std::vector<bool> lemma1_exact_per_j;
  bool lemma2_holds = false;           ///< h_nn < 1/2
  bool count_condition_holds = false;  ///< rho < n - (k+1)
  double rho = 0.0;
  Verdict verdict = Verdict::no_conflict;

  bool lemma1_exact_all() const;
};

/// Pure classification from the hat-matrix row of the outlier.
ConflictDiagnosis classify(std::size_t outlier_index, std::size_t n, std::size_t k, double h_nn,
                           std::vector<double> h_row, double rho);

/// Throws IndexOutOfRangeError or InvalidTailIndexError (rho <= 1).
ConflictDiagnosis diagnose(const linalg::RegressionData& data, std::size_t outlier_index, double rho);

/// d < n - k - 2, the degrees-of-freedom form of the count condition.
bool sufficient_dof(std::size_t n, std::size_t k, double d);

}  // namespace trobust::diagnostics
