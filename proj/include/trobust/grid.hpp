#pragma once

#include "trobust/linalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace trobust::posterior {

/// Quadrature nodes along one coordinate with trapezoid weights.
struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  bool operator==(const Axis&) const = default;
};

/**
 * A uniform core on [core_lo, core_hi] with optional geometric wings that
 * continue outward to [extent_lo, extent_hi]. Each wing step is the previous
 * step times wing_ratio, starting from the core spacing.
 */
struct AxisSpec {
  double core_lo = -1.0;
  double core_hi = 1.0;
  std::size_t core_points = 201;
  double extent_lo = -1.0;
  double extent_hi = 1.0;
  double wing_ratio = 1.3;
};

Axis make_axis(const AxisSpec& spec);

/// Beta axes are in coefficient units, the scale axis is in log sigma.
struct GridSpec {
  std::vector<AxisSpec> beta;
  AxisSpec log_sigma;
};

/// Box in (beta, sigma) space that should hold the bulk of a posterior.
struct GridWindow {
  linalg::VectorXd beta_lo;
  linalg::VectorXd beta_hi;
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
};

inline constexpr double kWindowStandardErrors = 10.0;
inline constexpr double kSigmaWindowFactor = 50.0;
inline constexpr std::size_t kDefaultGridPoints = 201;

/// OLS estimate +- 10 robust standard errors, sigma in [s/50, 50 s] with s
/// the OLS residual scale. The robust scale is 1.4826 * median |e_i|.
GridWindow default_window(const linalg::RegressionData& data);

/// Uniform core on `core`, wings reaching every window in `cover`.
GridSpec covering_grid(const GridWindow& core, std::span<const GridWindow> cover,
                       std::size_t points = kDefaultGridPoints, double wing_ratio = 1.3);

/// Reach of the default grid's wings, in units of the core half-width for
/// beta and as a factor for sigma.
inline constexpr double kWingReach = 10.0;

/// Uniform core on default_window(data) plus geometric wings: beta out to
/// kWingReach core half-widths beyond the core, sigma a factor kWingReach
/// beyond it on both sides.
GridSpec default_grid(const linalg::RegressionData& data, std::size_t points = kDefaultGridPoints);

/**
 * Normalized density on a tensor grid over (beta_0, [beta_1,] log sigma).
 *
 * `log_density` is the log density per unit volume in (beta, log sigma)
 * coordinates, stored with the sigma axis varying fastest. Cell volumes are
 * the products of the axis weights.
 */
struct PosteriorGrid {
  std::vector<Axis> beta_axes;
  Axis log_sigma_axis;
  std::vector<double> log_density;
  double log_normalizer = 0.0;
  bool normalized = false;
  std::vector<std::string> warnings;

  std::size_t size() const { return log_density.size(); }
  /// Weight of the (beta_0, beta_1) plane cell for flat index / sigma count.
  double plane_weight(std::size_t plane_index) const;
  /// Volume of the cell at `flat_index`.
  double cell_weight(std::size_t flat_index) const;
  bool same_axes(const PosteriorGrid& other) const;
};

/// Total mass of the normalized grid; 1 up to round-off.
double total_mass(const PosteriorGrid& grid);

/// 0.5 * sum |p - q| * volume over a shared grid.
double total_variation(const PosteriorGrid& p, const PosteriorGrid& q);

struct MarginalSummary {
  double mean = 0.0;
  double lower = 0.0;  ///< 2.5% quantile
  double upper = 0.0;  ///< 97.5% quantile
};

struct PosteriorSummary {
  std::vector<MarginalSummary> beta;
  MarginalSummary sigma;
};

PosteriorSummary summarize(const PosteriorGrid& grid);

/// Marginal mass at each node of axis `axis` (beta axes first, then sigma).
std::vector<double> marginal_masses(const PosteriorGrid& grid, std::size_t axis);

}  // namespace trobust::posterior
