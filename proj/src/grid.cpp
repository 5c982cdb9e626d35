#include "trobust/grid.hpp"

#include "trobust/errors.hpp"

#include <algorithm>
#include <cmath>

namespace trobust::posterior {

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

// Each node's mass is spread uniformly over its trapezoid cell, which runs
// between the midpoints to its neighbours.
double quantile_from_masses(const std::vector<double>& nodes, const std::vector<double>& mass, double q) {
  double total = 0.0;
  for (double m : mass) total += m;
  const double target = q * total;
  const std::size_t last = nodes.size() - 1;
  double cum = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double next = cum + mass[i];
    if (next >= target && mass[i] > 0.0) {
      const double lo = i == 0 ? nodes[0] : 0.5 * (nodes[i - 1] + nodes[i]);
      const double hi = i == last ? nodes[last] : 0.5 * (nodes[i] + nodes[i + 1]);
      return lo + (target - cum) / mass[i] * (hi - lo);
    }
    cum = next;
  }
  return nodes.back();
}

}  // namespace

Axis make_axis(const AxisSpec& spec) {
  if (spec.core_points < 2) throw PreconditionError("an axis needs at least 2 core points");
  if (!(spec.core_hi > spec.core_lo)) throw PreconditionError("axis core must have positive width");
  if (!(spec.wing_ratio >= 1.0)) throw PreconditionError("wing ratio must be at least 1");

  const double step = (spec.core_hi - spec.core_lo) / static_cast<double>(spec.core_points - 1);
  std::vector<double> lower;
  for (double x = spec.core_lo, h = step * spec.wing_ratio; x > spec.extent_lo; h *= spec.wing_ratio) {
    x -= h;
    lower.push_back(x);
  }
  Axis axis;
  axis.nodes.assign(lower.rbegin(), lower.rend());
  for (std::size_t i = 0; i < spec.core_points; ++i) {
    axis.nodes.push_back(i + 1 == spec.core_points ? spec.core_hi : spec.core_lo + step * static_cast<double>(i));
  }
  for (double x = spec.core_hi, h = step * spec.wing_ratio; x < spec.extent_hi; h *= spec.wing_ratio) {
    x += h;
    axis.nodes.push_back(x);
  }

  const std::size_t m = axis.nodes.size();
  axis.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i == 0 ? 0.0 : axis.nodes[i] - axis.nodes[i - 1];
    const double right = i + 1 == m ? 0.0 : axis.nodes[i + 1] - axis.nodes[i];
    axis.weights[i] = 0.5 * (left + right);
  }
  return axis;
}

GridWindow default_window(const linalg::RegressionData& data) {
  const linalg::OlsFit fit = linalg::ols_fit(data);
  const auto n = static_cast<double>(data.n());
  const auto p = static_cast<double>(data.p());

  std::vector<double> abs_res(fit.residuals.size());
  for (Eigen::Index i = 0; i < fit.residuals.size(); ++i) abs_res[static_cast<std::size_t>(i)] = std::abs(fit.residuals(i));
  const double s_ols = std::sqrt(fit.residuals.squaredNorm() / (n - p));
  double s_robust = 1.4826 * median(abs_res);
  if (!(s_robust > 0.0)) s_robust = s_ols;
  if (!(s_robust > 0.0)) s_robust = 1.0;
  const double s_sigma = s_ols > 0.0 ? s_ols : s_robust;

  const linalg::MatrixXd XtX = data.X().transpose() * data.X();
  const linalg::VectorXd se = s_robust * XtX.ldlt().solve(linalg::MatrixXd::Identity(data.X().cols(), data.X().cols()))
                                             .diagonal()
                                             .cwiseSqrt();
  GridWindow w;
  w.beta_lo = fit.beta_hat - kWindowStandardErrors * se;
  w.beta_hi = fit.beta_hat + kWindowStandardErrors * se;
  w.sigma_lo = s_sigma / kSigmaWindowFactor;
  w.sigma_hi = s_sigma * kSigmaWindowFactor;
  return w;
}

GridSpec covering_grid(const GridWindow& core, std::span<const GridWindow> cover, std::size_t points,
                       double wing_ratio) {
  GridSpec spec;
  const auto p = core.beta_lo.size();
  for (Eigen::Index j = 0; j < p; ++j) {
    AxisSpec a{core.beta_lo(j), core.beta_hi(j), points, core.beta_lo(j), core.beta_hi(j), wing_ratio};
    for (const GridWindow& w : cover) {
      a.extent_lo = std::min(a.extent_lo, w.beta_lo(j));
      a.extent_hi = std::max(a.extent_hi, w.beta_hi(j));
    }
    spec.beta.push_back(a);
  }
  AxisSpec s{std::log(core.sigma_lo), std::log(core.sigma_hi), points,
             std::log(core.sigma_lo), std::log(core.sigma_hi), wing_ratio};
  for (const GridWindow& w : cover) {
    s.extent_lo = std::min(s.extent_lo, std::log(w.sigma_lo));
    s.extent_hi = std::max(s.extent_hi, std::log(w.sigma_hi));
  }
  spec.log_sigma = s;
  return spec;
}

GridSpec default_grid(const linalg::RegressionData& data, std::size_t points) {
  const GridWindow core = default_window(data);
  GridWindow outer = core;
  const linalg::VectorXd half = 0.5 * (core.beta_hi - core.beta_lo);
  outer.beta_lo = core.beta_lo - kWingReach * half;
  outer.beta_hi = core.beta_hi + kWingReach * half;
  outer.sigma_lo = core.sigma_lo / kWingReach;
  outer.sigma_hi = core.sigma_hi * kWingReach;
  return covering_grid(core, std::span<const GridWindow>(&outer, 1), points);
}

double PosteriorGrid::plane_weight(std::size_t plane_index) const {
  if (beta_axes.size() == 1) return beta_axes[0].weights[plane_index];
  const std::size_t n1 = beta_axes[1].size();
  return beta_axes[0].weights[plane_index / n1] * beta_axes[1].weights[plane_index % n1];
}

double PosteriorGrid::cell_weight(std::size_t flat_index) const {
  const std::size_t ns = log_sigma_axis.size();
  return plane_weight(flat_index / ns) * log_sigma_axis.weights[flat_index % ns];
}

bool PosteriorGrid::same_axes(const PosteriorGrid& other) const {
  return beta_axes == other.beta_axes && log_sigma_axis == other.log_sigma_axis;
}

double total_mass(const PosteriorGrid& grid) {
  const std::size_t ns = grid.log_sigma_axis.size();
  double total = 0.0;
  for (std::size_t plane = 0; plane * ns < grid.size(); ++plane) {
    const double pw = grid.plane_weight(plane);
    for (std::size_t s = 0; s < ns; ++s) {
      total += std::exp(grid.log_density[plane * ns + s]) * pw * grid.log_sigma_axis.weights[s];
    }
  }
  return total;
}

double total_variation(const PosteriorGrid& p, const PosteriorGrid& q) {
  if (!p.same_axes(q)) throw PreconditionError("total variation needs both densities on the same grid");
  const std::size_t ns = p.log_sigma_axis.size();
  double acc = 0.0;
  for (std::size_t plane = 0; plane * ns < p.size(); ++plane) {
    const double pw = p.plane_weight(plane);
    double row = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      const std::size_t c = plane * ns + s;
      row += std::abs(std::exp(p.log_density[c]) - std::exp(q.log_density[c])) * p.log_sigma_axis.weights[s];
    }
    acc += pw * row;
  }
  return 0.5 * acc;
}

std::vector<double> marginal_masses(const PosteriorGrid& grid, std::size_t axis) {
  const std::size_t nb = grid.beta_axes.size();
  if (axis > nb) throw IndexOutOfRangeError("grid axis out of range");
  const std::size_t ns = grid.log_sigma_axis.size();
  const std::size_t n1 = nb == 2 ? grid.beta_axes[1].size() : 1;
  const std::size_t len = axis == nb ? ns : grid.beta_axes[axis].size();
  std::vector<double> out(len, 0.0);
  for (std::size_t plane = 0; plane * ns < grid.size(); ++plane) {
    const double pw = grid.plane_weight(plane);
    for (std::size_t s = 0; s < ns; ++s) {
      const double m = std::exp(grid.log_density[plane * ns + s]) * pw * grid.log_sigma_axis.weights[s];
      if (axis == nb) {
        out[s] += m;
      } else if (axis == 0) {
        out[plane / n1] += m;
      } else {
        out[plane % n1] += m;
      }
    }
  }
  return out;
}

PosteriorSummary summarize(const PosteriorGrid& grid) {
  PosteriorSummary out;
  for (std::size_t j = 0; j < grid.beta_axes.size(); ++j) {
    const std::vector<double> mass = marginal_masses(grid, j);
    const std::vector<double>& nodes = grid.beta_axes[j].nodes;
    double total = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      total += mass[i];
      first += mass[i] * nodes[i];
    }
    out.beta.push_back({first / total, quantile_from_masses(nodes, mass, 0.025),
                        quantile_from_masses(nodes, mass, 0.975)});
  }
  const std::vector<double> mass = marginal_masses(grid, grid.beta_axes.size());
  const std::vector<double>& u = grid.log_sigma_axis.nodes;
  double total = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    total += mass[i];
    first += mass[i] * std::exp(u[i]);
  }
  out.sigma = {first / total, std::exp(quantile_from_masses(u, mass, 0.025)),
               std::exp(quantile_from_masses(u, mass, 0.975))};
  return out;
}

}  // namespace trobust::posterior
