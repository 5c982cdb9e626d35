#include "trobust/report.hpp"

#include "trobust/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace trobust::report {

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

namespace {

Json numbers(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

Json marginal(const posterior::MarginalSummary& m) {
  return Json{{"mean", number(m.mean)}, {"lower_95", number(m.lower)}, {"upper_95", number(m.upper)}};
}

}  // namespace

Json to_json(const diagnostics::ConflictDiagnosis& d) {
  Json exact = Json::array();
  for (bool b : d.lemma1_exact_per_j) exact.push_back(b);
  return Json{{"outlier", d.outlier_index + 1},
              {"n", d.n},
              {"k", d.k},
              {"rho", number(d.rho)},
              {"h_nn", number(d.h_nn)},
              {"h_row", numbers(d.h_row)},
              {"lemma1_sufficient", d.lemma1_sufficient},
              {"lemma1_exact_per_j", exact},
              {"lemma1_exact_all", d.lemma1_exact_all()},
              {"lemma2_holds", d.lemma2_holds},
              {"count_condition_holds", d.count_condition_holds},
              {"verdict", std::string(diagnostics::to_string(d.verdict))}};
}

Json to_json(const posterior::PosteriorSummary& s) {
  Json beta = Json::array();
  for (const auto& m : s.beta) beta.push_back(marginal(m));
  return Json{{"beta", beta}, {"sigma", marginal(s.sigma)}};
}

Json to_json(const regvar::TailIndexEstimate& e) {
  return Json{{"method", e.method == regvar::TailMethod::scaling_ratio ? "scaling_ratio" : "log_log_slope"},
              {"evaluation_points", numbers(e.evaluation_points)},
              {"trace", numbers(e.trace)},
              {"rho_hat", number(e.rho_hat)},
              {"converged", e.converged}};
}

Json to_json(const lab::SweepResult& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    records.push_back(Json{{"y_out", number(rec.y_out)},
                           {"distance_to_tilted_loo", number(rec.distance_to_tilted_loo)},
                           {"distance_to_loo", number(rec.distance_to_loo)},
                           {"beta_mean", numbers(rec.beta_mean)},
                           {"sigma_mean", number(rec.sigma_mean)}});
  }
  Json out{{"records", records}, {"monotone_tail", r.monotone_tail}, {"tilted_loo", to_json(r.tilted_summary)}};
  if (!r.records.empty()) out["diagnosis"] = to_json(r.records.front().diagnosis);
  return out;
}

Json to_json(const linalg::RegressionData& data) {
  Json x = Json::array();
  for (Eigen::Index i = 0; i < data.X().rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 1; j < data.X().cols(); ++j) row.push_back(number(data.X()(i, j)));
    x.push_back(row);
  }
  std::vector<double> y(data.y().data(), data.y().data() + data.y().size());
  return Json{{"n", data.n()}, {"k", data.k()}, {"y", numbers(y)}, {"x", x}};
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

void emit_report(const Json& report, const std::filesystem::path& path) { io::write_text(path, render(report)); }

}  // namespace trobust::report
