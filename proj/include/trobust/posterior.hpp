#pragma once

#include "trobust/grid.hpp"
#include "trobust/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace trobust::posterior {

/**
 * Student-t linear regression with fixed degrees of freedom d:
 *
 *   y_i | beta, sigma ~ (1/sigma) t_d((y_i - X_i' beta) / sigma)
 *   p(beta_q) ∝ 1,  p(sigma) ∝ 1/sigma
 *
 * The regularly-varying index of the error density is rho = d + 1.
 */
struct TRegressionModel {
  double d = 1.0;
  linalg::RegressionData data;

  TRegressionModel(double dof, linalg::RegressionData regression);

  double rho() const { return d + 1.0; }
};

enum class Engine { quadrature, mcmc };

/// Log posterior up to a constant, in (beta, sigma) coordinates.
/// Throws DomainError for sigma <= 0.
double log_unnormalized_posterior(const TRegressionModel& model, const linalg::VectorXd& beta, double sigma);

struct SamplerConfig {
  std::size_t iterations = 20000;  ///< total, including burn-in
  std::size_t burnin = 5000;
  /// Exponent a of the scale prior p(sigma) ∝ sigma^a; -1 is the model prior.
  double sigma_prior_power = -1.0;
};

struct PosteriorSamples {
  linalg::MatrixXd beta_draws;  ///< draws x (k+1)
  linalg::VectorXd sigma_draws;
  std::uint64_t seed = 0;
  std::size_t n_draws = 0;
  std::size_t n_burnin = 0;
  std::vector<std::string> warnings;
};

/**
 * Gibbs sampler on the normal scale-mixture form of the t likelihood.
 *
 * Each observation carries a weight lambda_i ~ Gamma(d/2, rate d/2) with
 * y_i | lambda_i ~ N(X_i' beta, sigma^2 / lambda_i). Given the weights,
 * (sigma^2, beta) are drawn jointly: sigma^2 from its inverse-gamma
 * marginal, then beta from the weighted least-squares normal.
 * Deterministic for a given seed.
 */
PosteriorSamples fit_mcmc(const TRegressionModel& model, const SamplerConfig& config, std::uint64_t seed);

/// Same sampler on raw data with an arbitrary power prior on sigma.
PosteriorSamples sample_power_prior(const linalg::RegressionData& data, double d, const SamplerConfig& config,
                                    std::uint64_t seed);

PosteriorSummary summarize(const PosteriorSamples& samples);

/// Standard error of the mean by non-overlapping batch means.
double batch_means_se(std::span<const double> draws, std::size_t batches = 50);

/// Density proportional to sigma^a * prod_i (1/sigma) t_d(r_i / sigma) on
/// the grid; requires k <= 1.
PosteriorGrid power_prior_grid(const linalg::RegressionData& data, double d, double sigma_prior_power,
                               const GridSpec& spec);

PosteriorGrid quadrature_posterior(const TRegressionModel& model, const GridSpec& spec);
PosteriorGrid quadrature_posterior(const TRegressionModel& model);

struct EngineOptions {
  Engine engine = Engine::quadrature;
  std::optional<GridSpec> grid;  ///< default grid of the retained data if absent
  SamplerConfig sampler;
  std::uint64_t seed = 0;
};

using Posterior = std::variant<PosteriorGrid, PosteriorSamples>;

/// Posterior from the n-1 observations other than `drop_index`.
Posterior loo_posterior(const TRegressionModel& model, std::size_t drop_index, const EngineOptions& options);

/**
 * sigma^(rho-2) times the likelihood of the n-1 retained observations,
 * normalized on the grid: the limit of the full posterior as the dropped
 * response diverges. Throws NonNormalizableError unless rho < n - (k+1).
 */
PosteriorGrid tilted_loo_posterior(const TRegressionModel& model, std::size_t drop_index, double rho,
                                   const GridSpec& spec);

/// Sampler counterpart of tilted_loo_posterior.
PosteriorSamples tilted_loo_samples(const TRegressionModel& model, std::size_t drop_index, double rho,
                                    const SamplerConfig& config, std::uint64_t seed);

}  // namespace trobust::posterior
