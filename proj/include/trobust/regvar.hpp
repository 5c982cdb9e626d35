#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace trobust::regvar {

/// Location-scale Student-t with d degrees of freedom.
struct TDensity {
  double d = 1.0;
  double mu = 0.0;
  double sigma = 1.0;
};

enum class TailMethod { scaling_ratio, log_log_slope };

struct TailIndexEstimate {
  double rho_hat = 0.0;
  std::vector<double> evaluation_points;
  std::vector<double> trace;  ///< estimate at each evaluation point
  TailMethod method = TailMethod::scaling_ratio;
  bool converged = false;
};

struct TailIndexOptions {
  double x_start = 1e3;
  double t_factor = 10.0;
  std::size_t steps = 4;
  double tolerance = 0.05;
  TailMethod method = TailMethod::scaling_ratio;
};

/// log of Gamma((d+1)/2) / (Gamma(d/2) sqrt(pi d) sigma).
double t_log_normalizer(const TDensity& dist);

double t_log_density(const TDensity& dist, double x);

/**
 * Numerical regular-variation index of exp(log_density) on the right tail.
 *
 * Evaluates x_i = x_start * t^i for i < steps. The ratio method reports
 * [log f(t x_i) - log f(x_i)] / log t, the slope method log f(x_i) / log x_i.
 * The estimate is flagged converged when the last two values differ by less
 * than the tolerance.
 *
 * Throws PreconditionError for a bad schedule and EvaluationError when the
 * log density is not finite at an evaluation point.
 */
TailIndexEstimate estimate_tail_index(const std::function<double(double)>& log_density,
                                      const TailIndexOptions& options = {});

/// Positive credence c of a t density in R_{-c}: d + 1.
double credence(double d);

}  // namespace trobust::regvar
