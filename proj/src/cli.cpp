#include "trobust/cli.hpp"

#include "trobust/csv.hpp"
#include "trobust/diagnostics.hpp"
#include "trobust/errors.hpp"
#include "trobust/limit_lab.hpp"
#include "trobust/posterior.hpp"
#include "trobust/regvar.hpp"
#include "trobust/report.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace trobust::cli {

namespace {

using report::Json;
using report::number;

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw PreconditionError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::size_t zero_based_outlier(const RunConfig& c, const linalg::RegressionData& data) {
  if (!c.outlier) throw PreconditionError("--outlier is required for " + c.command);
  if (*c.outlier < 1 || *c.outlier > data.n()) {
    throw IndexOutOfRangeError("--outlier must lie in 1.." + std::to_string(data.n()));
  }
  return *c.outlier - 1;
}

linalg::RegressionData load(const RunConfig& c) {
  if (!c.input_path) throw PreconditionError("--input is required for " + c.command);
  return io::ingest_csv(*c.input_path);
}

posterior::Engine engine_of(const std::string& name) {
  if (name == "quadrature") return posterior::Engine::quadrature;
  if (name == "mcmc") return posterior::Engine::mcmc;
  throw PreconditionError("unknown engine '" + name + "'");
}

Json config_echo(const RunConfig& c) {
  Json j{{"command", c.command}};
  if (c.input_path) j["input"] = *c.input_path;
  if (c.command == "diagnose" || c.command == "sweep") {
    if (c.outlier) j["outlier"] = *c.outlier;
  }
  if (c.command == "tailindex") {
    j["dof"] = number(c.d);
    j["x_start"] = number(c.x_start);
    j["t_factor"] = number(c.t_factor);
    j["steps"] = c.steps;
    j["method"] = c.method;
    return j;
  }
  if (c.command == "fixture") {
    j["kind"] = c.fixture_kind;
    j["seed"] = c.seed;
    return j;
  }
  j["dof"] = number(c.d);
  if (c.command == "diagnose") {
    if (c.rho) j["rho"] = number(*c.rho);
    return j;
  }
  j["engine"] = c.engine;
  j["seed"] = c.seed;
  j["iters"] = c.iterations;
  j["burnin"] = c.burnin;
  j["grid_points"] = c.grid_points;
  if (c.command == "sweep") {
    j["y_ladder"] = c.y_ladder;
    j["distance"] = c.distance;
  }
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json run_diagnose(const RunConfig& c, std::ostream& out) {
  const linalg::RegressionData data = load(c);
  const std::size_t idx = zero_based_outlier(c, data);
  const double rho = c.rho ? *c.rho : regvar::credence(c.d);
  const diagnostics::ConflictDiagnosis diag = diagnostics::diagnose(data, idx, rho);
  Json result = report::to_json(diag);
  result["sufficient_dof"] = diagnostics::sufficient_dof(data.n(), data.k(), c.d);
  out << "outlier " << idx + 1 << ": h_nn = " << fmt(diag.h_nn) << ", rho = " << fmt(rho)
      << ", verdict = " << diagnostics::to_string(diag.verdict) << "\n";
  return result;
}

Json run_fit(const RunConfig& c, std::ostream& out) {
  const posterior::TRegressionModel model(c.d, load(c));
  Json result;
  posterior::PosteriorSummary summary;
  std::string table;
  if (engine_of(c.engine) == posterior::Engine::quadrature) {
    const posterior::PosteriorGrid grid = posterior::quadrature_posterior(model, posterior::default_grid(model.data, c.grid_points));
    summary = posterior::summarize(grid);
    result["engine"] = "quadrature";
    result["summary"] = report::to_json(summary);
    result["total_mass"] = number(posterior::total_mass(grid));
    result["log_normalizer"] = number(grid.log_normalizer);
    result["warnings"] = grid.warnings;
    table = "axis,node,mass\n";
    for (std::size_t a = 0; a <= grid.beta_axes.size(); ++a) {
      const std::vector<double> mass = posterior::marginal_masses(grid, a);
      const bool is_sigma = a == grid.beta_axes.size();
      const auto& nodes = is_sigma ? grid.log_sigma_axis.nodes : grid.beta_axes[a].nodes;
      const std::string name = is_sigma ? "sigma" : "beta" + std::to_string(a);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        table += name + "," + csv_number(is_sigma ? std::exp(nodes[i]) : nodes[i]) + "," + csv_number(mass[i]) + "\n";
      }
    }
  } else {
    const posterior::PosteriorSamples samples = posterior::fit_mcmc(model, {c.iterations, c.burnin, -1.0}, c.seed);
    summary = posterior::summarize(samples);
    Json se = Json::array();
    for (Eigen::Index j = 0; j < samples.beta_draws.cols(); ++j) {
      const linalg::VectorXd col = samples.beta_draws.col(j);
      se.push_back(number(posterior::batch_means_se({col.data(), static_cast<std::size_t>(col.size())})));
    }
    result["engine"] = "mcmc";
    result["summary"] = report::to_json(summary);
    result["mc_se"] = Json{{"beta", se},
                           {"sigma", number(posterior::batch_means_se(
                                         {samples.sigma_draws.data(), static_cast<std::size_t>(samples.n_draws)}))}};
    result["n_draws"] = samples.n_draws;
    result["warnings"] = samples.warnings;
    table = "draw";
    for (Eigen::Index j = 0; j < samples.beta_draws.cols(); ++j) table += ",beta" + std::to_string(j);
    table += ",sigma\n";
    for (Eigen::Index i = 0; i < samples.beta_draws.rows(); ++i) {
      table += std::to_string(i);
      for (Eigen::Index j = 0; j < samples.beta_draws.cols(); ++j) table += "," + csv_number(samples.beta_draws(i, j));
      table += "," + csv_number(samples.sigma_draws(i)) + "\n";
    }
  }
  for (std::size_t j = 0; j < summary.beta.size(); ++j) {
    out << "beta" << j << ": mean " << fmt(summary.beta[j].mean) << "  95% [" << fmt(summary.beta[j].lower) << ", "
        << fmt(summary.beta[j].upper) << "]\n";
  }
  out << "sigma: mean " << fmt(summary.sigma.mean) << "  95% [" << fmt(summary.sigma.lower) << ", "
      << fmt(summary.sigma.upper) << "]\n";
  if (c.table_path) io::write_text(*c.table_path, table);
  return result;
}

Json run_sweep(const RunConfig& c, std::ostream& out) {
  const linalg::RegressionData data = load(c);
  lab::SweepConfig sc;
  sc.outlier_index = zero_based_outlier(c, data);
  sc.y_values = parse_ladder(c.y_ladder);
  sc.d = c.d;
  sc.engine = engine_of(c.engine);
  sc.distance = c.distance == "mean" ? lab::Distance::abs_mean_difference : lab::Distance::total_variation_on_grid;
  sc.grid_points = c.grid_points;
  sc.sampler = {c.iterations, c.burnin, -1.0};
  sc.seed = c.seed;
  const lab::SweepResult result = lab::run_sweep(data, sc);

  std::string table = "y_out,distance_to_tilted_loo,distance_to_loo";
  for (std::size_t j = 0; j <= data.k(); ++j) table += ",beta" + std::to_string(j) + "_mean";
  table += ",sigma_mean\n";
  out << "y_out         d(full, tilted)  d(full, loo)\n";
  for (const auto& rec : result.records) {
    table += csv_number(rec.y_out) + "," + csv_number(rec.distance_to_tilted_loo) + "," + csv_number(rec.distance_to_loo);
    for (double b : rec.beta_mean) table += "," + csv_number(b);
    table += "," + csv_number(rec.sigma_mean) + "\n";
    char line[96];
    std::snprintf(line, sizeof line, "%-13.6g %-16.6g %-.6g\n", rec.y_out, rec.distance_to_tilted_loo,
                  rec.distance_to_loo);
    out << line;
  }
  out << "monotone tail: " << (result.monotone_tail ? "yes" : "no") << "\n";
  if (c.table_path) io::write_text(*c.table_path, table);
  return report::to_json(result);
}

Json run_tailindex(const RunConfig& c, std::ostream& out) {
  const regvar::TDensity dist{c.d, 0.0, 1.0};
  if (!(c.d > 0.0)) throw InvalidDofError("degrees of freedom must be positive");
  regvar::TailIndexOptions opt;
  opt.x_start = c.x_start;
  opt.t_factor = c.t_factor;
  opt.steps = c.steps;
  if (c.method == "ratio") {
    opt.method = regvar::TailMethod::scaling_ratio;
  } else if (c.method == "slope") {
    opt.method = regvar::TailMethod::log_log_slope;
  } else {
    throw PreconditionError("unknown method '" + c.method + "'");
  }
  const regvar::TailIndexEstimate est =
      regvar::estimate_tail_index([&](double x) { return regvar::t_log_density(dist, x); }, opt);
  Json result = report::to_json(est);
  result["expected_index"] = number(-(c.d + 1.0));
  result["credence"] = number(regvar::credence(c.d));
  out << "estimated index " << fmt(est.rho_hat) << " (t density with d = " << fmt(c.d) << ": "
      << fmt(-(c.d + 1.0)) << ")" << (est.converged ? "" : ", not converged") << "\n";
  return result;
}

Json run_fixture(const RunConfig& c, std::ostream& out) {
  const lab::Fixture fx = lab::make_fixture(lab::fixture_kind_from_string(c.fixture_kind), c.seed);
  const diagnostics::ConflictDiagnosis diag = diagnostics::diagnose(fx.data, fx.outlier_index, regvar::credence(fx.d));
  if (c.csv_path) io::write_text(*c.csv_path, io::format_csv(fx.data));
  out << c.fixture_kind << " fixture: n = " << fx.data.n() << ", outlier " << fx.outlier_index + 1
      << ", d = " << fmt(fx.d) << ", verdict = " << diagnostics::to_string(diag.verdict) << "\n";
  return Json{{"kind", c.fixture_kind},
              {"outlier", fx.outlier_index + 1},
              {"dof", number(fx.d)},
              {"data", report::to_json(fx.data)},
              {"diagnosis", report::to_json(diag)}};
}

}  // namespace

std::vector<double> parse_ladder(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') == std::string::npos) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    if (out.empty()) throw PreconditionError("empty y ladder");
    return out;
  }
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw PreconditionError("y ladder must be start:stop:step");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const bool geometric = !parts[2].empty() && (parts[2][0] == 'x' || parts[2][0] == '*');
  const double step = parse_double(geometric ? std::string_view(parts[2]).substr(1) : std::string_view(parts[2]));
  if (geometric ? !(step > 1.0 && start > 0.0) : !(step > 0.0)) throw PreconditionError("y ladder step must increase");
  const double slack = geometric ? 1e-9 * stop : 1e-9 * step;
  for (std::size_t i = 0;; ++i) {
    const double v = geometric ? start * std::pow(step, static_cast<double>(i)) : start + step * static_cast<double>(i);
    if (v > stop + slack) break;
    out.push_back(v);
    if (out.size() > 100000) throw PreconditionError("y ladder too long");
  }
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Json result;
  try {
    if (config.command == "diagnose") {
      result = run_diagnose(config, out);
    } else if (config.command == "fit") {
      result = run_fit(config, out);
    } else if (config.command == "sweep") {
      result = run_sweep(config, out);
    } else if (config.command == "tailindex") {
      result = run_tailindex(config, out);
    } else if (config.command == "fixture") {
      result = run_fixture(config, out);
    } else {
      err << "unknown command '" << config.command << "'\n";
      return kUsageError;
    }
    report::emit_report(Json{{"command", config.command}, {"config", config_echo(config)}, {"result", result}},
                        config.output_path);
    return kOk;
  } catch (const lab::SweepConditionError& e) {
    err << "condition violated: " << e.what() << "\n";
    try {
      report::emit_report(Json{{"command", config.command},
                               {"config", config_echo(config)},
                               {"error", e.what()},
                               {"diagnosis", report::to_json(e.diagnosis())}},
                          config.output_path);
    } catch (const IoError& io) {
      err << io.what() << "\n";
    }
    return kConditionViolated;
  } catch (const ConditionViolatedError& e) {
    err << "condition violated: " << e.what() << "\n";
    return kConditionViolated;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Student-t regression outlier diagnostics and limiting-posterior experiments", "trobust"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", c.output_path, "Report file (JSON)");
    sub->add_option("--dof", c.d, "Degrees of freedom of the t errors");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--input", c.input_path, "CSV: header row, response first, regressors after")->required();
  };
  auto add_inference = [&](CLI::App* sub) {
    sub->add_option("--engine", c.engine, "Inference engine")->check(CLI::IsMember({"quadrature", "mcmc"}));
    sub->add_option("--seed", c.seed, "Sampler seed");
    sub->add_option("--iters", c.iterations, "Sampler iterations including burn-in");
    sub->add_option("--burnin", c.burnin, "Sampler burn-in");
    sub->add_option("--grid-points", c.grid_points, "Quadrature points per axis core");
    sub->add_option("--table", c.table_path, "CSV side table");
  };

  CLI::App* diagnose = app.add_subcommand("diagnose", "Conflict and robustness conditions for an outlier");
  add_common(diagnose);
  add_data(diagnose);
  diagnose->add_option("--outlier", c.outlier, "1-based index of the designated outlier")->required();
  diagnose->add_option("--rho", c.rho, "Tail index (defaults to dof + 1)");

  CLI::App* fit = app.add_subcommand("fit", "Posterior of the Student-t regression");
  add_common(fit);
  add_data(fit);
  add_inference(fit);

  CLI::App* sweep = app.add_subcommand("sweep", "Drive the outlier response up a ladder of values");
  add_common(sweep);
  add_data(sweep);
  add_inference(sweep);
  sweep->add_option("--outlier", c.outlier, "1-based index of the designated outlier")->required();
  sweep->add_option("--y-ladder", c.y_ladder, "start:stop:xFACTOR, start:stop:STEP or a comma list");
  sweep->add_option("--distance", c.distance, "tv or mean")->check(CLI::IsMember({"tv", "mean"}));

  CLI::App* tail = app.add_subcommand("tailindex", "Numerical tail index of the t density");
  add_common(tail);
  tail->add_option("--x-start", c.x_start);
  tail->add_option("--t-factor", c.t_factor);
  tail->add_option("--steps", c.steps);
  tail->add_option("--method", c.method)->check(CLI::IsMember({"ratio", "slope"}));

  CLI::App* fixture = app.add_subcommand("fixture", "Generate a synthetic data set");
  fixture->add_option("--out", c.output_path, "Report file (JSON)");
  fixture->add_option("--kind", c.fixture_kind)->check(CLI::IsMember({"conflict", "leverage", "insufficient"}));
  fixture->add_option("--seed", c.seed);
  fixture->add_option("--csv", c.csv_path, "Write the data set as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.distance.empty()) c.distance = c.engine == "mcmc" ? "mean" : "tv";
  return run(c, out, err);
}

}  // namespace trobust::cli
