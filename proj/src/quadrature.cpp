#include "trobust/errors.hpp"
#include "trobust/posterior.hpp"
#include "trobust/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace trobust::posterior {

namespace {

// Posterior mass near the grid boundary above this fraction of the peak
// density triggers a grid-too-small warning.
constexpr double kBoundaryDensityRatio = 1e-3;

void require_retained_estimable(const linalg::RegressionData& data) {
  if (data.n() - 1 <= data.p()) {
    throw PreconditionError("leave-one-out needs n-1 > k+1, got n = " + std::to_string(data.n()) +
                            ", k = " + std::to_string(data.k()));
  }
}

}  // namespace

TRegressionModel::TRegressionModel(double dof, linalg::RegressionData regression)
    : d(dof), data(std::move(regression)) {
  if (!(d > 0.0) || !std::isfinite(d)) throw InvalidDofError("degrees of freedom must be positive");
}

double log_unnormalized_posterior(const TRegressionModel& model, const linalg::VectorXd& beta, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive, got " + std::to_string(sigma));
  if (beta.size() != model.data.X().cols()) throw PreconditionError("beta has the wrong length");
  const linalg::VectorXd mean = model.data.X() * beta;
  double acc = -std::log(sigma);
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    acc += regvar::t_log_density({model.d, mean(i), sigma}, model.data.y()(i));
  }
  return acc;
}

PosteriorGrid power_prior_grid(const linalg::RegressionData& data, double d, double sigma_prior_power,
                               const GridSpec& spec) {
  if (data.k() > 1) throw PreconditionError("quadrature engine supports k <= 1");
  if (spec.beta.size() != data.p()) throw PreconditionError("grid dimension does not match the model");

  PosteriorGrid grid;
  for (const AxisSpec& a : spec.beta) grid.beta_axes.push_back(make_axis(a));
  grid.log_sigma_axis = make_axis(spec.log_sigma);

  const Axis& b0 = grid.beta_axes[0];
  const Axis b1 = data.k() == 1 ? grid.beta_axes[1] : Axis{{0.0}, {1.0}};
  const Axis& u = grid.log_sigma_axis;
  const std::size_t ns = u.size();
  const auto m = data.y().size();
  const double md = static_cast<double>(m);
  const linalg::VectorXd x = data.k() == 1 ? linalg::VectorXd(data.X().col(1)) : linalg::VectorXd::Zero(m);
  const linalg::VectorXd& y = data.y();

  const double log_norm = regvar::t_log_normalizer({d, 0.0, 1.0});
  const double half_dp1 = 0.5 * (d + 1.0);
  std::vector<double> inv_scale(ns);
  std::vector<double> sigma_terms(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    inv_scale[s] = std::exp(-2.0 * u.nodes[s]) / d;
    // per-observation -log sigma, the sigma^a prior, and the log-sigma Jacobian
    sigma_terms[s] = md * log_norm + (sigma_prior_power + 1.0 - md) * u.nodes[s];
  }

  grid.log_density.resize(b0.size() * b1.size() * ns);
  std::vector<double> r2(static_cast<std::size_t>(m));
  double peak = -std::numeric_limits<double>::infinity();
  std::size_t c = 0;
  for (std::size_t i0 = 0; i0 < b0.size(); ++i0) {
    for (std::size_t i1 = 0; i1 < b1.size(); ++i1) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const double r = y(i) - b0.nodes[i0] - b1.nodes[i1] * x(i);
        r2[static_cast<std::size_t>(i)] = r * r;
      }
      for (std::size_t s = 0; s < ns; ++s, ++c) {
        double acc = 0.0;
        for (double rr : r2) acc += std::log1p(rr * inv_scale[s]);
        const double v = sigma_terms[s] - half_dp1 * acc;
        grid.log_density[c] = v;
        peak = std::max(peak, v);
      }
    }
  }
  if (!std::isfinite(peak)) throw EvaluationError("posterior is not finite on the grid");

  double z = 0.0;
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    z += std::exp(grid.log_density[cell] - peak) * grid.cell_weight(cell);
  }
  grid.log_normalizer = peak + std::log(z);
  double boundary_peak = -std::numeric_limits<double>::infinity();
  const std::size_t n1 = b1.size();
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    grid.log_density[cell] -= grid.log_normalizer;
    const std::size_t s = cell % ns;
    const std::size_t plane = cell / ns;
    const std::size_t i0 = plane / n1;
    const std::size_t i1 = plane % n1;
    const bool edge = s == 0 || s + 1 == ns || i0 == 0 || i0 + 1 == b0.size() ||
                      (n1 > 1 && (i1 == 0 || i1 + 1 == n1));
    if (edge) boundary_peak = std::max(boundary_peak, grid.log_density[cell]);
  }
  grid.normalized = true;
  if (boundary_peak - (peak - grid.log_normalizer) > std::log(kBoundaryDensityRatio)) {
    grid.warnings.push_back("grid-too-small: boundary density exceeds 1e-3 of the peak");
  }
  return grid;
}

PosteriorGrid quadrature_posterior(const TRegressionModel& model, const GridSpec& spec) {
  return power_prior_grid(model.data, model.d, -1.0, spec);
}

PosteriorGrid quadrature_posterior(const TRegressionModel& model) {
  if (model.data.k() > 1) throw PreconditionError("quadrature engine supports k <= 1");
  return quadrature_posterior(model, default_grid(model.data));
}

Posterior loo_posterior(const TRegressionModel& model, std::size_t drop_index, const EngineOptions& options) {
  require_retained_estimable(model.data);
  const TRegressionModel retained(model.d, model.data.without_row(drop_index));
  if (options.engine == Engine::mcmc) return fit_mcmc(retained, options.sampler, options.seed);
  const GridSpec spec = options.grid ? *options.grid : default_grid(retained.data);
  return quadrature_posterior(retained, spec);
}

namespace {

void require_normalizable(const TRegressionModel& model, std::size_t drop_index, double rho) {
  if (drop_index >= model.data.n()) throw IndexOutOfRangeError("drop index out of range");
  if (!(rho > 1.0)) throw InvalidTailIndexError("tail index rho must exceed 1");
  require_retained_estimable(model.data);
  const double limit = static_cast<double>(model.data.n()) - static_cast<double>(model.data.k() + 1);
  if (!(rho < limit)) {
    throw NonNormalizableError("tilted leave-one-out posterior is not normalizable: rho = " + std::to_string(rho) +
                               " >= n-(k+1) = " + std::to_string(limit));
  }
}

}  // namespace

PosteriorGrid tilted_loo_posterior(const TRegressionModel& model, std::size_t drop_index, double rho,
                                   const GridSpec& spec) {
  require_normalizable(model, drop_index, rho);
  return power_prior_grid(model.data.without_row(drop_index), model.d, rho - 2.0, spec);
}

PosteriorSamples tilted_loo_samples(const TRegressionModel& model, std::size_t drop_index, double rho,
                                    const SamplerConfig& config, std::uint64_t seed) {
  require_normalizable(model, drop_index, rho);
  SamplerConfig tilted = config;
  tilted.sigma_prior_power = rho - 2.0;
  return sample_power_prior(model.data.without_row(drop_index), model.d, tilted, seed);
}

}  // namespace trobust::posterior
