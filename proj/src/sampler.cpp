#include "trobust/diagnostics.hpp"
#include "trobust/errors.hpp"
#include "trobust/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace trobust::posterior {

namespace {

double sample_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

MarginalSummary summarize_draws(const linalg::VectorXd& draws) {
  std::vector<double> v(draws.data(), draws.data() + draws.size());
  return {draws.mean(), sample_quantile(v, 0.025), sample_quantile(v, 0.975)};
}

}  // namespace

PosteriorSamples sample_power_prior(const linalg::RegressionData& data, double d, const SamplerConfig& config,
                                    std::uint64_t seed) {
  if (!(d > 0.0)) throw InvalidDofError("degrees of freedom must be positive");
  if (config.burnin >= config.iterations) throw PreconditionError("burn-in must be shorter than the run");
  const linalg::OlsFit ols = linalg::ols_fit(data);

  const linalg::MatrixXd& X = data.X();
  const linalg::VectorXd& y = data.y();
  const auto m = X.rows();
  const auto p = X.cols();
  const double shape_sigma2 = 0.5 * (static_cast<double>(m - p) - config.sigma_prior_power - 1.0);
  if (!(shape_sigma2 > 0.0)) {
    throw PreconditionError("scale prior power " + std::to_string(config.sigma_prior_power) +
                            " gives an improper conditional for sigma");
  }

  linalg::VectorXd beta = ols.beta_hat;
  double sigma = std::sqrt(ols.residuals.squaredNorm() / static_cast<double>(m - p));
  if (!(sigma > 0.0)) sigma = 1.0;
  {
    const TRegressionModel probe(d, data);
    if (!std::isfinite(log_unnormalized_posterior(probe, beta, sigma))) {
      throw InitializationError("posterior is not finite at the initial state");
    }
  }

  PosteriorSamples out;
  out.seed = seed;
  out.n_burnin = config.burnin;
  out.n_draws = config.iterations - config.burnin;
  out.beta_draws.resize(static_cast<Eigen::Index>(out.n_draws), p);
  out.sigma_draws.resize(static_cast<Eigen::Index>(out.n_draws));
  if (!diagnostics::sufficient_dof(data.n(), data.k(), d)) {
    out.warnings.push_back("d >= n-k-2: the posterior may become improper as an outlier diverges");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  linalg::VectorXd lambda(m);
  linalg::VectorXd z(p);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const linalg::VectorXd resid = y - X * beta;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double rate = 0.5 * (d + resid(i) * resid(i) / (sigma * sigma));
      lambda(i) = std::gamma_distribution<double>(0.5 * (d + 1.0), 1.0 / rate)(rng);
    }

    const linalg::MatrixXd XtL = X.transpose() * lambda.asDiagonal();
    const Eigen::LLT<linalg::MatrixXd> chol(XtL * X);
    if (chol.info() != Eigen::Success) throw EvaluationError("weighted cross-product is not positive definite");
    const linalg::VectorXd center = chol.solve(XtL * y);
    const linalg::VectorXd wres = y - X * center;
    const double ssr = (lambda.array() * wres.array().square()).sum();

    const double g = std::gamma_distribution<double>(shape_sigma2, 1.0)(rng);
    sigma = std::sqrt(0.5 * ssr / g);
    for (Eigen::Index j = 0; j < p; ++j) z(j) = standard_normal(rng);
    beta = center + sigma * chol.matrixU().solve(z);

    if (it >= config.burnin) {
      const auto row = static_cast<Eigen::Index>(it - config.burnin);
      out.beta_draws.row(row) = beta.transpose();
      out.sigma_draws(row) = sigma;
    }
  }
  return out;
}

PosteriorSamples fit_mcmc(const TRegressionModel& model, const SamplerConfig& config, std::uint64_t seed) {
  SamplerConfig standard = config;
  standard.sigma_prior_power = -1.0;
  return sample_power_prior(model.data, model.d, standard, seed);
}

PosteriorSummary summarize(const PosteriorSamples& samples) {
  PosteriorSummary out;
  for (Eigen::Index j = 0; j < samples.beta_draws.cols(); ++j) {
    out.beta.push_back(summarize_draws(samples.beta_draws.col(j)));
  }
  out.sigma = summarize_draws(samples.sigma_draws);
  return out;
}

double batch_means_se(std::span<const double> draws, std::size_t batches) {
  if (batches < 2 || draws.size() < 2 * batches) throw PreconditionError("too few draws for batch means");
  const std::size_t len = draws.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < len; ++i) means[b] += draws[b * len + i];
    means[b] /= static_cast<double>(len);
  }
  double mu = 0.0;
  for (double v : means) mu += v;
  mu /= static_cast<double>(batches);
  double var = 0.0;
  for (double v : means) var += (v - mu) * (v - mu);
  var /= static_cast<double>(batches - 1);
  return std::sqrt(var / static_cast<double>(batches));
}

}  // namespace trobust::posterior
