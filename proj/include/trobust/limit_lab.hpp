#pragma once

#include "trobust/diagnostics.hpp"
#include "trobust/errors.hpp"
#include "trobust/grid.hpp"
#include "trobust/linalg.hpp"
#include "trobust/posterior.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace trobust::lab {

enum class Distance { total_variation_on_grid, abs_mean_difference };

struct SweepConfig {
  std::vector<double> y_values;  ///< outlier responses, non-decreasing
  std::size_t outlier_index = 0;
  double d = 3.0;
  posterior::Engine engine = posterior::Engine::quadrature;
  Distance distance = Distance::total_variation_on_grid;
  std::size_t grid_points = posterior::kDefaultGridPoints;
  posterior::SamplerConfig sampler;
  std::uint64_t seed = 0;
};

struct SweepRecord {
  double y_out = 0.0;
  double distance_to_tilted_loo = 0.0;
  /// Same distance to the untilted leave-one-out posterior.
  double distance_to_loo = 0.0;
  std::vector<double> beta_mean;
  double sigma_mean = 0.0;
  diagnostics::ConflictDiagnosis diagnosis;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  bool monotone_tail = false;
  posterior::PosteriorSummary tilted_summary;
};

/// Thrown when the limiting posterior does not exist for the configuration.
class SweepConditionError : public ConditionViolatedError {
 public:
  SweepConditionError(const std::string& what, diagnostics::ConflictDiagnosis diagnosis)
      : ConditionViolatedError(what), diagnosis_(std::move(diagnosis)) {}
  const diagnostics::ConflictDiagnosis& diagnosis() const { return diagnosis_; }

 private:
  diagnostics::ConflictDiagnosis diagnosis_;
};

/// Relative slack allowed between successive distances in the tail.
inline constexpr double kMonotoneSlack = 0.10;
/// Distances below this are treated as numerically zero by the tail check.
inline constexpr double kDistanceFloor = 1e-12;
/// Relative step a sigma mean must exceed to count as an increase.
inline constexpr double kDriftStep = 0.05;

/// Shared grid for a sweep: uniform core on the leave-one-out window, wings
/// reaching the full-data window at every y value of the sweep.
posterior::GridSpec sweep_grid(const linalg::RegressionData& data, const SweepConfig& config);

/// True iff each of the last three steps (last four distances) is
/// non-increasing within kMonotoneSlack.
bool tail_is_monotone(const std::vector<double>& distances);

/**
 * Moves the designated response along config.y_values and compares the full
 * posterior at each value with the limiting tilted leave-one-out posterior.
 *
 * Throws SweepConditionError when rho = d+1 >= n-(k+1).
 */
SweepResult run_sweep(const linalg::RegressionData& data, const SweepConfig& config);

/// Posterior sigma means of the full model along the sweep (quadrature).
std::vector<double> sigma_means(const linalg::RegressionData& data, const SweepConfig& config);

/// True when the sigma posterior mean grows by more than kDriftStep across
/// every successive y value: scale mass escaping with the outlier.
bool sigma_drift_check(const linalg::RegressionData& data, const SweepConfig& config);

enum class FixtureKind { conflict, leverage, insufficient };

std::string_view to_string(FixtureKind kind);
FixtureKind fixture_kind_from_string(std::string_view name);

struct Fixture {
  FixtureKind kind = FixtureKind::conflict;
  linalg::RegressionData data;
  std::size_t outlier_index = 0;
  double d = 3.0;
};

/// Target outlier leverage of the leverage fixture.
inline constexpr double kLeverageTarget = 0.9;

/**
 * Deterministic synthetic data set with a designated outlier.
 *
 * conflict: n=10, k=1, outlier at the mean x with a displaced response.
 * leverage: same cluster, outlier x placed so that its leverage is 0.9.
 * insufficient: n=5, k=1, d=5 so that d >= n-k-2.
 */
Fixture make_fixture(FixtureKind kind, std::uint64_t seed);

/// Regressor row for an extra observation that attains leverage `target`
/// when appended to `others`, displaced from their mean along `direction`.
linalg::VectorXd place_for_leverage(const linalg::MatrixXd& others, const linalg::VectorXd& direction,
                                    double target);

}  // namespace trobust::lab
