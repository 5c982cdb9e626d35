#include "trobust/diagnostics.hpp"

#include "trobust/errors.hpp"

#include <algorithm>
#include <string>

namespace trobust::diagnostics {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::conflict_robust: return "conflict_robust";
    case Verdict::leverage_point: return "leverage_point";
    case Verdict::insufficient_sample: return "insufficient_sample";
    case Verdict::no_conflict: return "no_conflict";
  }
  return "unknown";
}

bool ConflictDiagnosis::lemma1_exact_all() const {
  return std::all_of(lemma1_exact_per_j.begin(), lemma1_exact_per_j.end(), [](bool b) { return b; });
}

ConflictDiagnosis classify(std::size_t outlier_index, std::size_t n, std::size_t k, double h_nn,
                           std::vector<double> h_row, double rho) {
  ConflictDiagnosis out;
  out.outlier_index = outlier_index;
  out.n = n;
  out.k = k;
  out.h_nn = h_nn;
  out.rho = rho;
  out.lemma1_sufficient = std::all_of(h_row.begin(), h_row.end(), [](double h) { return h > 0.0; });
  out.lemma1_exact_per_j.reserve(h_row.size());
  for (double h_nj : h_row) out.lemma1_exact_per_j.push_back(1.0 - h_nn > -h_nj);
  out.h_row = std::move(h_row);
  out.lemma2_holds = h_nn < 0.5;
  out.count_condition_holds = rho < static_cast<double>(n) - static_cast<double>(k + 1);

  if (!out.lemma2_holds) {
    out.verdict = Verdict::leverage_point;
  } else if (!out.lemma1_exact_all()) {
    out.verdict = Verdict::no_conflict;
  } else if (!out.count_condition_holds) {
    out.verdict = Verdict::insufficient_sample;
  } else {
    out.verdict = Verdict::conflict_robust;
  }
  return out;
}

ConflictDiagnosis diagnose(const linalg::RegressionData& data, std::size_t outlier_index, double rho) {
  if (outlier_index >= data.n()) {
    throw IndexOutOfRangeError("outlier index " + std::to_string(outlier_index) + " out of range for n = " +
                               std::to_string(data.n()));
  }
  if (!(rho > 1.0)) throw InvalidTailIndexError("tail index rho must exceed 1, got " + std::to_string(rho));

  const linalg::HatMatrix hat = linalg::hat_matrix(data);
  const auto i = static_cast<Eigen::Index>(outlier_index);
  std::vector<double> row;
  row.reserve(data.n() - 1);
  for (Eigen::Index j = 0; j < hat.H.cols(); ++j) {
    if (j != i) row.push_back(hat.H(i, j));
  }
  return classify(outlier_index, data.n(), data.k(), hat.H(i, i), std::move(row), rho);
}

bool sufficient_dof(std::size_t n, std::size_t k, double d) {
  return d < static_cast<double>(n) - static_cast<double>(k) - 2.0;
}

}  // namespace trobust::diagnostics
