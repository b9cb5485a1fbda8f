// Copyright 2026 The uqbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uqbench/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uqbench/errors.hpp"

namespace uqbench::solver {

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("cfl must lie in (0, 0.5]");
  if (!(limiter_theta >= 1.0 && limiter_theta <= 2.0)) {
    throw ConfigError("limiter_theta must lie in [1, 2]");
  }
  if (t_end && !(*t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (source_rate < 0.0) throw ConfigError("source_rate must be nonnegative");
}

Grid Grid::uniform(const ScenarioConfig& cfg) {
  Grid g;
  g.n_cells = cfg.n_cells;
  g.dr = (cfg.r_max - cfg.r_min) / static_cast<double>(cfg.n_cells);
  g.r_faces.resize(g.n_cells + 1);
  g.r_centers.resize(g.n_cells);
  for (std::size_t k = 0; k <= g.n_cells; ++k) {
    g.r_faces[k] = cfg.r_min + g.dr * static_cast<double>(k);
  }
  g.r_faces.back() = cfg.r_max;
  for (std::size_t j = 0; j < g.n_cells; ++j) {
    g.r_centers[j] = cfg.r_min + g.dr * (static_cast<double>(j) + 0.5);
  }
  return g;
}

double minmod(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
  return 0.0;
}

namespace {

// Limited slope of a cell from its two neighbours, in units of 1/m.
inline double limited_slope(double left, double centre, double right, double theta, double dr) {
  return minmod(theta * (centre - left), 0.5 * (right - left), theta * (right - centre)) / dr;
}

}  // namespace

Reconstruction reconstruct_with_ghosts(std::span<const double> values, double left_ghost,
                                       double right_ghost, double theta, double dr) {
  const std::size_t n = values.size();
  Reconstruction rec;
  rec.slopes.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j == 0 ? left_ghost : values[j - 1];
    const double right = j + 1 == n ? right_ghost : values[j + 1];
    rec.slopes[j] = limited_slope(left, values[j], right, theta, dr);
  }
  rec.minus.resize(n + 1);
  rec.plus.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    rec.minus[k] = k == 0 ? left_ghost : values[k - 1] + 0.5 * dr * rec.slopes[k - 1];
    rec.plus[k] = k == n ? right_ghost : values[k] - 0.5 * dr * rec.slopes[k];
  }
  return rec;
}

Reconstruction reconstruct(std::span<const double> values, double theta, double dr) {
  const std::size_t n = values.size();
  if (n < 2) {
    Reconstruction rec;
    rec.slopes.assign(n, 0.0);
    return rec;
  }
  const double left_ghost = 2.0 * values[0] - values[1];
  const double right_ghost = 2.0 * values[n - 1] - values[n - 2];
  Reconstruction full = reconstruct_with_ghosts(values, left_ghost, right_ghost, theta, dr);
  Reconstruction rec;
  rec.slopes = std::move(full.slopes);
  rec.minus.assign(full.minus.begin() + 1, full.minus.end() - 1);
  rec.plus.assign(full.plus.begin() + 1, full.plus.end() - 1);
  return rec;
}

namespace {

inline double central_upwind(const physics::FluxValue& left, const physics::FluxValue& right,
                             double s_minus, double s_plus) {
  const double a_plus = std::max({left.df, right.df, 0.0});
  const double a_minus = std::min({left.df, right.df, 0.0});
  const double spread = a_plus - a_minus;
  if (spread == 0.0) return left.f;
  return (a_plus * left.f - a_minus * right.f) / spread +
         a_plus * a_minus / spread * (s_plus - s_minus);
}

}  // namespace

double numerical_flux(double s_minus, double s_plus, double omega2, const ScenarioConfig& cfg) {
  const auto left = physics::fractional_flow_with_derivative(s_minus, omega2, cfg.mu_n, cfg.mu_w);
  const auto right = physics::fractional_flow_with_derivative(s_plus, omega2, cfg.mu_n, cfg.mu_w);
  return central_upwind(left, right, std::clamp(s_minus, 0.0, 1.0), std::clamp(s_plus, 0.0, 1.0));
}

TransportCoefficients make_coefficients(const UncertainInput& omega, const ScenarioConfig& cfg,
                                        const SolverConfig& scfg) {
  if (!(omega.omega1 >= -1.0) || !(omega.omega2 > 0.0) || !(omega.omega3 > 0.0 && omega.omega3 < 1.0)) {
    throw DomainError("uncertain input outside the admissible range");
  }
  TransportCoefficients c;
  c.velocity = physics::radial_flux(omega.omega1, cfg);
  c.porosity = omega.omega3;
  c.exponent = omega.omega2;
  c.max_speed_factor = physics::max_flux_derivative(omega.omega2, cfg);
  c.source = scfg.source_rate * (1.0 + omega.omega1) / omega.omega3;
  return c;
}

TransportOperator::TransportOperator(const ScenarioConfig& cfg, const SolverConfig& scfg)
    : cfg_(cfg), scfg_(scfg), grid_(Grid::uniform(cfg)) {
  cfg_.validate();
  scfg_.validate();
}

BoundaryFlow TransportOperator::rhs(std::span<const double> s, const TransportCoefficients& coeffs,
                                    std::span<double> dsdt) const {
  const std::size_t n = grid_.n_cells;
  const double dr = grid_.dr;
  const double theta = scfg_.limiter_theta;
  const double w = coeffs.exponent;
  const double mu_n = cfg_.mu_n;
  const double mu_w = cfg_.mu_w;
  const double left_ghost = cfg_.S_left;
  const double right_ghost = s[n - 1];

  auto value = [&](std::size_t j) { return j == 0 ? left_ghost : s[j - 1]; };  // shifted by one
  // Streaming sweep over faces k = 0..n; cell k-1 lies left of face k.
  double prev_flux = 0.0;
  double slope_left = 0.0;  // ghost has zero slope
  double slope_right =
      limited_slope(left_ghost, s[0], n > 1 ? s[1] : right_ghost, theta, dr);
  BoundaryFlow flow;
  for (std::size_t k = 0; k <= n; ++k) {
    const double s_minus = value(k) + 0.5 * dr * slope_left;
    const double s_plus = k == n ? right_ghost : s[k] - 0.5 * dr * slope_right;
    const auto fl = physics::fractional_flow_with_derivative(s_minus, w, mu_n, mu_w);
    const auto fr = physics::fractional_flow_with_derivative(s_plus, w, mu_n, mu_w);
    const double flux = central_upwind(fl, fr, std::clamp(s_minus, 0.0, 1.0),
                                       std::clamp(s_plus, 0.0, 1.0));
    if (k == 0) {
      flow.inflow = coeffs.velocity * flux;
    } else {
      const std::size_t j = k - 1;
      dsdt[j] = -coeffs.velocity / (coeffs.porosity * grid_.r_centers[j]) * (flux - prev_flux) / dr +
                coeffs.source;
    }
    if (k == n) flow.outflow = coeffs.velocity * flux;
    prev_flux = flux;
    if (k < n) {
      slope_left = slope_right;
      const double next_right = k + 2 <= n - 1 ? s[k + 2] : right_ghost;
      slope_right = k + 1 < n ? limited_slope(s[k], s[k + 1], next_right, theta, dr) : 0.0;
    }
  }
  return flow;
}

double TransportOperator::stable_dt(const TransportCoefficients& coeffs) const {
  const double speed =
      coeffs.velocity / (coeffs.porosity * grid_.r_centers.front()) * coeffs.max_speed_factor;
  if (!(speed > 0.0)) return std::numeric_limits<double>::infinity();
  return scfg_.cfl * grid_.dr / speed;
}

double TransportOperator::storage(std::span<const double> s, double porosity) const {
  double total = 0.0;
  for (std::size_t j = 0; j < grid_.n_cells; ++j) total += s[j] * grid_.r_centers[j];
  return porosity * total * grid_.dr;
}

TransportSolver::TransportSolver(const UncertainInput& omega, const ScenarioConfig& cfg,
                                 const SolverConfig& scfg)
    : op_(cfg, scfg),
      coeffs_(make_coefficients(omega, cfg, scfg)),
      state_(cfg.n_cells, 0.0),
      k1_(cfg.n_cells),
      k2_(cfg.n_cells),
      stage_(cfg.n_cells) {}

void TransportSolver::set_state(std::span<const double> values) {
  if (values.size() != state_.size()) throw ConfigError("state size does not match the grid");
  std::copy(values.begin(), values.end(), state_.begin());
}

StepLedger TransportSolver::step(double dt) {
  const double limit = stable_dt();
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " s violates the CFL condition; use dt <= " << limit << " s";
    throw NumericError(msg.str());
  }
  const std::size_t n = state_.size();
  const BoundaryFlow f1 = op_.rhs(state_, coeffs_, k1_);
  for (std::size_t j = 0; j < n; ++j) stage_[j] = state_[j] + dt * k1_[j];
  const BoundaryFlow f2 = op_.rhs(stage_, coeffs_, k2_);
  for (std::size_t j = 0; j < n; ++j) {
    state_[j] = 0.5 * (state_[j] + stage_[j] + dt * k2_[j]);
  }
  time_ += dt;
  return {dt, 0.5 * dt * ((f1.inflow - f1.outflow) + (f2.inflow - f2.outflow))};
}

std::size_t step_count(double t_end, double dt_max) {
  if (!std::isfinite(dt_max)) return 1;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt_max)));
}

SaturationField TransportSolver::run_to_end() {
  const double t_end = op_.settings().end_time(op_.scenario());
  const double limit = stable_dt();
  const std::size_t steps = step_count(t_end - time_, limit);
  const double dt = (t_end - time_) / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    if (std::isfinite(limit)) {
      step(dt);
    } else {
      time_ += dt;  // no transport: the state is stationary
    }
  }
  time_ = t_end;
  return {state_, time_};
}

SaturationField step_rk2(const SaturationField& field, double dt, const UncertainInput& omega,
                         const ScenarioConfig& cfg, const SolverConfig& scfg) {
  TransportSolver solver(omega, cfg, scfg);
  solver.set_state(field.values);
  solver.step(dt);
  return {solver.state(), field.time + dt};
}

SaturationField simulate(const UncertainInput& omega, const ScenarioConfig& cfg,
                         const SolverConfig& scfg) {
  TransportSolver solver(omega, cfg, scfg);
  return solver.run_to_end();
}

}  // namespace uqbench::solver
