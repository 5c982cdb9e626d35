#include "trobust/regvar.hpp"

#include "trobust/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace trobust::regvar {

double t_log_normalizer(const TDensity& dist) {
  const double d = dist.d;
  return std::lgamma(0.5 * (d + 1.0)) - std::lgamma(0.5 * d) - 0.5 * std::log(std::numbers::pi * d) -
         std::log(dist.sigma);
}

double t_log_density(const TDensity& dist, double x) {
  const double z = (x - dist.mu) / dist.sigma;
  return t_log_normalizer(dist) - 0.5 * (dist.d + 1.0) * std::log1p(z * z / dist.d);
}

TailIndexEstimate estimate_tail_index(const std::function<double(double)>& log_density,
                                      const TailIndexOptions& options) {
  if (!(options.x_start > 1.0)) throw PreconditionError("x_start must exceed 1");
  if (!(options.t_factor > 1.0)) throw PreconditionError("t_factor must exceed 1");
  if (options.steps < 2) throw PreconditionError("need at least 2 steps");

  auto eval = [&](double x) {
    const double v = log_density(x);
    if (!std::isfinite(v)) throw EvaluationError("log density not finite at x = " + std::to_string(x));
    return v;
  };

  TailIndexEstimate out;
  out.method = options.method;
  const double log_t = std::log(options.t_factor);
  double x = options.x_start;
  double f_x = eval(x);
  for (std::size_t i = 0; i < options.steps; ++i) {
    out.evaluation_points.push_back(x);
    if (options.method == TailMethod::scaling_ratio) {
      const double f_tx = eval(options.t_factor * x);
      out.trace.push_back((f_tx - f_x) / log_t);
      f_x = f_tx;
    } else {
      out.trace.push_back(f_x / std::log(x));
      if (i + 1 < options.steps) f_x = eval(options.t_factor * x);
    }
    x *= options.t_factor;
  }
  out.rho_hat = out.trace.back();
  const double last_change = std::abs(out.trace.back() - out.trace[out.trace.size() - 2]);
  out.converged = last_change < options.tolerance;
  return out;
}

double credence(double d) {
  if (!(d > 0.0)) throw InvalidDofError("degrees of freedom must be positive, got " + std::to_string(d));
  return d + 1.0;
}

}  // namespace trobust::regvar
