// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include "trobust/cli.hpp"
#include "trobust/diagnostics.hpp"
#include "trobust/errors.hpp"
#include "trobust/limit_lab.hpp"
#include "trobust/linalg.hpp"
#include "trobust/posterior.hpp"
#include "trobust/regvar.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

using trobust::linalg::MatrixXd;
using trobust::linalg::RegressionData;
using trobust::linalg::VectorXd;
namespace lab = trobust::lab;
namespace post = trobust::posterior;

constexpr std::uint64_t kFixtureSeed = 1;
constexpr std::size_t kDesigns = 1000;
constexpr std::size_t kSensitivityDesigns = 100;
constexpr std::size_t kRepetitions = 40;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Random intercept designs with n in [3, 50], k in [1, 5] and n >= k + 2.
std::vector<RegressionData> random_designs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> k_dist(1, 5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<RegressionData> out;
  while (out.size() < count) {
    const int k = k_dist(rng);
    const int n = std::uniform_int_distribution<int>(std::max(3, k + 2), 50)(rng);
    MatrixXd Z(n, k);
    VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) Z(i, j) = normal(rng);
      y(i) = normal(rng);
    }
    RegressionData data = RegressionData::with_intercept(y, Z);
    try {
      data.require_estimable();
    } catch (const trobust::SingularDesignError&) {
      continue;
    }
    out.push_back(std::move(data));
  }
  return out;
}

Outcome hat_bounds() {
  constexpr double slack = 1e-9;
  const auto start = std::chrono::steady_clock::now();
  const auto designs = random_designs(kDesigns, 101);
  std::size_t violations = 0;
  for (const RegressionData& data : designs) {
    const MatrixXd H = trobust::linalg::hat_matrix(data).H;
    const double n = static_cast<double>(data.n());
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      for (Eigen::Index j = 0; j < H.cols(); ++j) {
        const double lo = i == j ? 1.0 / n : 1.0 / n - 0.5;
        const double hi = i == j ? 1.0 : 0.5;
        if (H(i, j) < lo - slack || H(i, j) > hi + slack) ++violations;
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {violations == 0 && elapsed < 10.0,
          fmt("%zu designs, %zu bound violations, %.2f s (limit 10 s)", designs.size(), violations, elapsed)};
}

Outcome leverage_reconstruction() {
  const auto designs = random_designs(kDesigns, 101);
  double worst = 0.0;
  for (const RegressionData& data : designs) {
    const MatrixXd H = trobust::linalg::hat_matrix(data).H;
    for (std::size_t i = 0; i < data.n(); ++i) {
      const double h = trobust::linalg::leverage_decomposition(data, i).h_nn_reconstructed;
      worst = std::max(worst, std::abs(h - H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))));
    }
  }
  return {worst <= 1e-10, fmt("max |h_nn(W,g) - H_nn| = %.3g over all rows (tol 1e-10)", worst)};
}

Outcome residual_sensitivities() {
  const auto designs = random_designs(kSensitivityDesigns, 202);
  constexpr double step = 1.0;
  double worst = 0.0;
  for (const RegressionData& data : designs) {
    const std::size_t out = data.n() - 1;
    const auto e_plus = trobust::linalg::ols_fit(data.with_response(out, data.y()(out) + step)).residuals;
    const auto e_minus = trobust::linalg::ols_fit(data.with_response(out, data.y()(out) - step)).residuals;
    const VectorXd fd = (e_plus - e_minus) / (2.0 * step);
    const MatrixXd H = trobust::linalg::hat_matrix(data).H;
    for (std::size_t j = 0; j < data.n(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const auto oo = static_cast<Eigen::Index>(out);
      const double expected = j == out ? 1.0 - H(oo, oo) : -H(oo, jj);
      worst = std::max(worst, std::abs(fd(jj) - expected));
    }
  }
  return {worst <= 1e-10, fmt("%zu designs, max |finite difference - closed form| = %.3g (tol 1e-10)",
                              designs.size(), worst)};
}

Outcome tail_index() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double d : {1.0, 2.0, 3.0, 5.0, 10.0}) {
    const trobust::regvar::TDensity t{d, 0.0, 1.0};
    const auto est = trobust::regvar::estimate_tail_index(
        [&](double x) { return trobust::regvar::t_log_density(t, x); });
    const double err = std::abs(est.rho_hat + (d + 1.0));
    ok = ok && err < 0.05;
    detail += fmt("d=%g: %.4f; ", d, est.rho_hat);
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 1.0, detail + fmt("%.3f s (tol 0.05, limit 1 s)", elapsed)};
}

lab::SweepConfig decade_sweep(const lab::Fixture& fx) {
  lab::SweepConfig config;
  config.y_values = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  config.outlier_index = fx.outlier_index;
  config.d = fx.d;
  return config;
}

// Shared by criteria 5 and 6.
const lab::SweepResult& conflict_sweep(double* elapsed = nullptr) {
  static double seconds = 0.0;
  static const lab::SweepResult result = [] {
    const auto start = std::chrono::steady_clock::now();
    const lab::Fixture fx = lab::make_fixture(lab::FixtureKind::conflict, kFixtureSeed);
    lab::SweepResult r = lab::run_sweep(fx.data, decade_sweep(fx));
    seconds = seconds_since(start);
    return r;
  }();
  if (elapsed != nullptr) *elapsed = seconds;
  return result;
}

Outcome tilted_limit_convergence() {
  double elapsed = 0.0;
  const lab::SweepResult& r = conflict_sweep(&elapsed);
  const auto& rec = r.records;
  const double last = rec.back().distance_to_tilted_loo;
  bool non_increasing = true;
  for (std::size_t i = rec.size() - 3; i < rec.size(); ++i) {
    non_increasing = non_increasing && rec[i].distance_to_tilted_loo <= rec[i - 1].distance_to_tilted_loo;
  }
  return {last < 0.05 && non_increasing && elapsed < 300.0,
          fmt("TV at 1e6 = %.3g (limit 0.05), TV over 1e3..1e6 = %.3g, %.3g, %.3g, %.3g %s, %.1f s", last,
              rec[rec.size() - 4].distance_to_tilted_loo, rec[rec.size() - 3].distance_to_tilted_loo,
              rec[rec.size() - 2].distance_to_tilted_loo, last, non_increasing ? "non-increasing" : "INCREASING",
              elapsed)};
}

Outcome partial_robustness() {
  const lab::SweepRecord& last = conflict_sweep().records.back();
  return {last.distance_to_tilted_loo < last.distance_to_loo,
          fmt("at y=1e6: TV to tilted = %.3g, TV to untilted = %.3g", last.distance_to_tilted_loo,
              last.distance_to_loo)};
}

Outcome condition_violation() {
  const lab::Fixture fx = lab::make_fixture(lab::FixtureKind::insufficient, kFixtureSeed);
  const post::TRegressionModel model(fx.d, fx.data);
  bool raised = false;
  try {
    post::tilted_loo_posterior(model, fx.outlier_index, model.rho(), post::default_grid(fx.data));
  } catch (const trobust::NonNormalizableError&) {
    raised = true;
  }
  const lab::SweepConfig config = decade_sweep(fx);
  const std::vector<double> means = lab::sigma_means(fx.data, config);
  const bool drift = lab::sigma_drift_check(fx.data, config);
  std::string trail;
  for (double m : means) trail += fmt("%.4g ", m);
  return {raised && drift, fmt("non-normalizable error %s, sigma drift %s; sigma means ", raised ? "raised" : "NOT raised",
                               drift ? "true" : "false") +
                               trail};
}

Outcome leverage_failure() {
  const lab::Fixture fx = lab::make_fixture(lab::FixtureKind::leverage, kFixtureSeed);
  const auto diag = trobust::diagnostics::diagnose(fx.data, fx.outlier_index, fx.d + 1.0);
  const bool verdict_ok = diag.verdict == trobust::diagnostics::Verdict::leverage_point;
  const lab::SweepConfig config = decade_sweep(fx);
  const lab::SweepResult r = lab::run_sweep(fx.data, config);
  bool tracks = true;
  std::string trail;
  for (const lab::SweepRecord& rec : r.records) {
    const double ols = trobust::linalg::ols_fit(fx.data.with_response(fx.outlier_index, rec.y_out)).beta_hat(1);
    const double rel = std::abs(rec.beta_mean[1] - ols) / std::abs(ols);
    tracks = tracks && rel <= 0.10;
    trail += fmt("y=%g: %.4g vs %.4g; ", rec.y_out, rec.beta_mean[1], ols);
  }
  return {verdict_ok && tracks, fmt("h_nn = %.3f, verdict %s, slope within 10%% of OLS %s; posterior vs OLS slope ",
                                    diag.h_nn, std::string(trobust::diagnostics::to_string(diag.verdict)).c_str(),
                                    tracks ? "everywhere" : "NOT everywhere") +
                                    trail};
}

Outcome sampler_oracle() {
  bool ok = true;
  std::string detail;
  for (lab::FixtureKind kind : {lab::FixtureKind::conflict, lab::FixtureKind::leverage, lab::FixtureKind::insufficient}) {
    const lab::Fixture fx = lab::make_fixture(kind, kFixtureSeed);
    const post::TRegressionModel model(fx.d, fx.data);
    const post::PosteriorSummary oracle = post::summarize(post::quadrature_posterior(model));
    std::size_t passing = 0;
    for (std::size_t rep = 0; rep < kRepetitions; ++rep) {
      const post::PosteriorSamples s = post::fit_mcmc(model, post::SamplerConfig{}, 1000 + rep);
      bool within = true;
      auto check = [&](const VectorXd& draws, double target) {
        const double se = post::batch_means_se(std::span<const double>(draws.data(), draws.size()));
        within = within && std::abs(draws.mean() - target) <= 3.0 * se;
      };
      for (Eigen::Index j = 0; j < s.beta_draws.cols(); ++j) {
        check(s.beta_draws.col(j), oracle.beta[static_cast<std::size_t>(j)].mean);
      }
      check(s.sigma_draws, oracle.sigma.mean);
      if (within) ++passing;
    }
    ok = ok && passing * 100 >= 95 * kRepetitions;
    detail += fmt("%s %zu/%zu; ", std::string(lab::to_string(kind)).c_str(), passing, kRepetitions);
  }
  return {ok, detail + "(need >= 95%)"};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / fmt("trobust_acceptance_%d", static_cast<int>(::getpid()));
  fs::create_directories(dir);
  const std::string input = (dir / "conflict.csv").string();
  auto run = [&](std::vector<std::string> args) {
    std::vector<const char*> argv{"trobust"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    return trobust::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  run({"fixture", "--kind", "conflict", "--seed", "3", "--csv", input, "--out", (dir / "fx.json").string()});

  const std::vector<std::vector<std::string>> commands = {
      {"diagnose", "--input", input, "--outlier", "10", "--dof", "3"},
      {"fit", "--input", input, "--engine", "mcmc", "--seed", "11", "--iters", "4000", "--burnin", "1000"},
      {"fit", "--input", input, "--engine", "quadrature", "--grid-points", "61"},
      {"sweep", "--input", input, "--outlier", "10", "--engine", "mcmc", "--seed", "5", "--iters", "3000", "--burnin",
       "1000", "--y-ladder", "1e1:1e3:x10"},
      {"tailindex", "--dof", "4"},
  };
  std::size_t identical = 0;
  std::string detail;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string reports[2];
    int codes[2];
    for (int r = 0; r < 2; ++r) {
      std::vector<std::string> args = commands[c];
      const fs::path report = dir / fmt("report_%zu_%d.json", c, r);
      args.push_back("--out");
      args.push_back(report.string());
      codes[r] = run(args);
      reports[r] = slurp(report);
    }
    const bool same = codes[0] == 0 && codes[1] == 0 && !reports[0].empty() && reports[0] == reports[1];
    if (same) ++identical;
    detail += fmt("%s %s; ", commands[c][0].c_str(), same ? "identical" : "DIFFERENT");
  }
  fs::remove_all(dir);
  return {identical == commands.size(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"hat-matrix bounds", hat_bounds},
      {"leverage reconstruction", leverage_reconstruction},
      {"residual sensitivities", residual_sensitivities},
      {"tail index", tail_index},
      {"convergence to the tilted leave-one-out posterior", tilted_limit_convergence},
      {"partial robustness", partial_robustness},
      {"count condition violation", condition_violation},
      {"leverage point failure", leverage_failure},
      {"sampler matches quadrature", sampler_oracle},
      {"determinism", determinism},
  };

  std::size_t only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = static_cast<std::size_t>(std::strtoul(argv[2], nullptr, 10));
    if (only < 1 || only > criteria.size()) {
      std::fprintf(stderr, "criterion must be between 1 and %zu\n", criteria.size());
      return 64;
    }
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 64;
  }

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %-50s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
