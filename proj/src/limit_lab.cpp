#include "trobust/limit_lab.hpp"
#include "trobust/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace trobust::lab {

namespace {

constexpr double kInterceptTrue = 2.0;
constexpr double kSlopeTrue = 0.5;
constexpr double kClusterSpan = 10.0;
constexpr double kConflictShift = 12.0;
constexpr double kLeverageShift = 3.0;

void validate(const linalg::RegressionData& data, const SweepConfig& config) {
  if (config.y_values.size() < 2) throw PreconditionError("a sweep needs at least two y values");
  for (std::size_t i = 0; i < config.y_values.size(); ++i) {
    if (!std::isfinite(config.y_values[i])) throw PreconditionError("sweep y values must be finite");
    if (i > 0 && config.y_values[i] < config.y_values[i - 1]) {
      throw PreconditionError("sweep y values must be non-decreasing");
    }
  }
  if (config.outlier_index >= data.n()) throw IndexOutOfRangeError("outlier index out of range");
  if (!(config.d > 0.0)) throw InvalidDofError("degrees of freedom must be positive");
}

double max_mean_difference(const posterior::PosteriorSummary& a, const posterior::PosteriorSummary& b) {
  double out = std::abs(a.sigma.mean - b.sigma.mean);
  for (std::size_t j = 0; j < a.beta.size(); ++j) out = std::max(out, std::abs(a.beta[j].mean - b.beta[j].mean));
  return out;
}

std::vector<double> beta_means(const posterior::PosteriorSummary& s) {
  std::vector<double> out;
  for (const auto& m : s.beta) out.push_back(m.mean);
  return out;
}

}  // namespace

posterior::GridSpec sweep_grid(const linalg::RegressionData& data, const SweepConfig& config) {
  validate(data, config);
  const posterior::GridWindow core = posterior::default_window(data.without_row(config.outlier_index));
  std::vector<posterior::GridWindow> cover;
  for (double y : config.y_values) {
    cover.push_back(posterior::default_window(data.with_response(config.outlier_index, y)));
  }
  return posterior::covering_grid(core, cover, config.grid_points);
}

bool tail_is_monotone(const std::vector<double>& distances) {
  const std::size_t start = distances.size() > 4 ? distances.size() - 4 : 0;
  for (std::size_t i = start + 1; i < distances.size(); ++i) {
    const double prev = distances[i - 1];
    const double next = distances[i];
    if (next > prev * (1.0 + kMonotoneSlack) && next > kDistanceFloor) return false;
  }
  return true;
}

SweepResult run_sweep(const linalg::RegressionData& data, const SweepConfig& config) {
  validate(data, config);
  const double rho = regvar::credence(config.d);
  diagnostics::ConflictDiagnosis diagnosis = diagnostics::diagnose(data, config.outlier_index, rho);
  if (!diagnosis.count_condition_holds) {
    throw SweepConditionError("rho = " + std::to_string(rho) + " >= n-(k+1): the limiting posterior does not exist",
                              diagnosis);
  }

  const posterior::TRegressionModel model(config.d, data);
  const linalg::RegressionData retained = data.without_row(config.outlier_index);
  SweepResult result;
  std::vector<double> distances;

  if (config.engine == posterior::Engine::quadrature) {
    const posterior::GridSpec spec = sweep_grid(data, config);
    const posterior::PosteriorGrid tilted = posterior::tilted_loo_posterior(model, config.outlier_index, rho, spec);
    const posterior::PosteriorGrid loo = posterior::power_prior_grid(retained, config.d, -1.0, spec);
    result.tilted_summary = posterior::summarize(tilted);
    const posterior::PosteriorSummary loo_summary = posterior::summarize(loo);
    for (double y : config.y_values) {
      const posterior::TRegressionModel moved(config.d, data.with_response(config.outlier_index, y));
      const posterior::PosteriorGrid full = posterior::quadrature_posterior(moved, spec);
      const posterior::PosteriorSummary summary = posterior::summarize(full);
      SweepRecord rec;
      rec.y_out = y;
      if (config.distance == Distance::total_variation_on_grid) {
        rec.distance_to_tilted_loo = posterior::total_variation(full, tilted);
        rec.distance_to_loo = posterior::total_variation(full, loo);
      } else {
        rec.distance_to_tilted_loo = max_mean_difference(summary, result.tilted_summary);
        rec.distance_to_loo = max_mean_difference(summary, loo_summary);
      }
      rec.beta_mean = beta_means(summary);
      rec.sigma_mean = summary.sigma.mean;
      rec.diagnosis = diagnosis;
      distances.push_back(rec.distance_to_tilted_loo);
      result.records.push_back(std::move(rec));
    }
  } else {
    if (config.distance != Distance::abs_mean_difference) {
      throw PreconditionError("the mcmc engine supports only the abs_mean_difference distance");
    }
    const posterior::PosteriorSamples tilted =
        posterior::tilted_loo_samples(model, config.outlier_index, rho, config.sampler, config.seed);
    const posterior::PosteriorSamples loo =
        posterior::fit_mcmc(posterior::TRegressionModel(config.d, retained), config.sampler, config.seed);
    result.tilted_summary = posterior::summarize(tilted);
    const posterior::PosteriorSummary loo_summary = posterior::summarize(loo);
    for (double y : config.y_values) {
      const posterior::TRegressionModel moved(config.d, data.with_response(config.outlier_index, y));
      const posterior::PosteriorSummary summary =
          posterior::summarize(posterior::fit_mcmc(moved, config.sampler, config.seed));
      SweepRecord rec;
      rec.y_out = y;
      rec.distance_to_tilted_loo = max_mean_difference(summary, result.tilted_summary);
      rec.distance_to_loo = max_mean_difference(summary, loo_summary);
      rec.beta_mean = beta_means(summary);
      rec.sigma_mean = summary.sigma.mean;
      rec.diagnosis = diagnosis;
      distances.push_back(rec.distance_to_tilted_loo);
      result.records.push_back(std::move(rec));
    }
  }
  result.monotone_tail = tail_is_monotone(distances);
  return result;
}

std::vector<double> sigma_means(const linalg::RegressionData& data, const SweepConfig& config) {
  const posterior::GridSpec spec = sweep_grid(data, config);
  std::vector<double> out;
  for (double y : config.y_values) {
    const posterior::TRegressionModel moved(config.d, data.with_response(config.outlier_index, y));
    out.push_back(posterior::summarize(posterior::quadrature_posterior(moved, spec)).sigma.mean);
  }
  return out;
}

bool sigma_drift_check(const linalg::RegressionData& data, const SweepConfig& config) {
  const std::vector<double> means = sigma_means(data, config);
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (!(means[i] > means[i - 1] * (1.0 + kDriftStep))) return false;
  }
  return true;
}

std::string_view to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::conflict: return "conflict";
    case FixtureKind::leverage: return "leverage";
    case FixtureKind::insufficient: return "insufficient";
  }
  return "unknown";
}

FixtureKind fixture_kind_from_string(std::string_view name) {
  if (name == "conflict") return FixtureKind::conflict;
  if (name == "leverage") return FixtureKind::leverage;
  if (name == "insufficient") return FixtureKind::insufficient;
  throw PreconditionError("unknown fixture kind '" + std::string(name) + "'");
}

linalg::VectorXd place_for_leverage(const linalg::MatrixXd& others, const linalg::VectorXd& direction,
                                    double target) {
  const double n = static_cast<double>(others.rows()) + 1.0;
  if (!(target > 1.0 / n && target < 1.0)) throw PreconditionError("target leverage must lie in (1/n, 1)");
  const linalg::RowVectorXd mean = others.colwise().mean();
  const linalg::MatrixXd dev = others.rowwise() - mean;
  const linalg::MatrixXd W = dev.transpose() * dev;
  if (!(linalg::condition_number(W) < linalg::kConditionLimit)) {
    throw DegenerateConfigurationError("scatter of the other rows is singular");
  }
  // With q = g'W^{-1}g, h = 1/n + (n-1) q / (1 + n q); invert for q, then
  // for the displacement t along `direction` (g = -sqrt(n-1) t v / n).
  const double q = (target - 1.0 / n) / (n * (1.0 - target));
  const double quad = direction.dot(W.ldlt().solve(direction));
  const double t = std::sqrt(q * n * n / ((n - 1.0) * quad));
  return mean.transpose() + t * direction;
}

Fixture make_fixture(FixtureKind kind, std::uint64_t seed) {
  const std::size_t cluster = kind == FixtureKind::insufficient ? 4 : 9;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xdist(0.0, kClusterSpan);
  std::normal_distribution<double> noise(0.0, 1.0);

  linalg::MatrixXd others(static_cast<Eigen::Index>(cluster), 1);
  linalg::VectorXd y(static_cast<Eigen::Index>(cluster + 1));
  for (Eigen::Index i = 0; i < others.rows(); ++i) others(i, 0) = xdist(rng);
  for (Eigen::Index i = 0; i < others.rows(); ++i) y(i) = kInterceptTrue + kSlopeTrue * others(i, 0) + noise(rng);

  double x_out = others.col(0).mean();
  double shift = kConflictShift;
  if (kind == FixtureKind::leverage) {
    x_out = place_for_leverage(others, linalg::VectorXd::Ones(1), kLeverageTarget)(0);
    shift = kLeverageShift;
  }
  y(static_cast<Eigen::Index>(cluster)) = kInterceptTrue + kSlopeTrue * x_out + shift;

  linalg::MatrixXd regressors(static_cast<Eigen::Index>(cluster + 1), 1);
  regressors << others, x_out;
  return Fixture{kind, linalg::RegressionData::with_intercept(std::move(y), regressors), cluster,
                 kind == FixtureKind::insufficient ? 5.0 : 3.0};
}

}  // namespace trobust::lab
