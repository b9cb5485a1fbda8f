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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uqbench/physics.hpp"

namespace uqbench::solver {

using physics::ScenarioConfig;
using physics::UncertainInput;

struct SolverConfig {
  double cfl = 0.45;
  double limiter_theta = 1.3;
  /// Overrides ScenarioConfig::T_end when set (seconds).
  std::optional<double> t_end;
  /// Optional distributed volumetric source in 1/s, scaled by (1 + omega1) / porosity.
  /// Zero injects through the inflow boundary only.
  double source_rate = 0.0;

  void validate() const;
  double end_time(const ScenarioConfig& cfg) const { return t_end.value_or(cfg.T_end); }
};

/// Uniform radial mesh on [r_min, r_max].
struct Grid {
  std::size_t n_cells = 0;
  double dr = 0.0;
  std::vector<double> r_faces;    // n_cells + 1
  std::vector<double> r_centers;  // n_cells

  static Grid uniform(const ScenarioConfig& cfg);
};

/// Cell averages of the effective gas saturation at a given time.
struct SaturationField {
  std::vector<double> values;
  double time = 0.0;
};

/// One-sided interface states and the limited slopes they came from.
struct Reconstruction {
  std::vector<double> minus;   // state left of each face
  std::vector<double> plus;    // state right of each face
  std::vector<double> slopes;  // per cell, in 1/m
};

double minmod(double a, double b, double c);

/// Generalized-minmod piecewise-linear reconstruction on the interior faces of
/// `values` (n-1 faces). Boundary cells use linearly extrapolated ghosts.
Reconstruction reconstruct(std::span<const double> values, double theta, double dr);

/// Same, on all n+1 faces with explicit ghost values (ghost slopes are zero).
Reconstruction reconstruct_with_ghosts(std::span<const double> values, double left_ghost,
                                       double right_ghost, double theta, double dr);

/// Central-upwind flux with one-sided local speeds from f'.
double numerical_flux(double s_minus, double s_plus, double omega2, const ScenarioConfig& cfg);

/// Everything the spatial operator needs from one realisation.
struct TransportCoefficients {
  double velocity = 0.0;  // u = cp Q (1 + omega1), m^2/s
  double porosity = 0.15;
  double exponent = 2.0;
  double max_speed_factor = 0.0;  // max_s f'(s)
  double source = 0.0;            // dS/dt contribution, 1/s
};

TransportCoefficients make_coefficients(const UncertainInput& omega, const ScenarioConfig& cfg,
                                        const SolverConfig& scfg);

/// Fluxes (u F) through the inflow and outflow faces, m^2/s.
struct BoundaryFlow {
  double inflow = 0.0;
  double outflow = 0.0;
};

/// Semi-discrete operator dS_j/dt = -(u / (phi r_j)) (F_{j+1/2} - F_{j-1/2}) / dr.
/// Dirichlet inflow S_left on the left, zero-gradient outflow on the right.
class TransportOperator {
 public:
  TransportOperator(const ScenarioConfig& cfg, const SolverConfig& scfg);

  const Grid& grid() const { return grid_; }
  const ScenarioConfig& scenario() const { return cfg_; }
  const SolverConfig& settings() const { return scfg_; }

  BoundaryFlow rhs(std::span<const double> s, const TransportCoefficients& coeffs,
                   std::span<double> dsdt) const;

  /// Largest dt allowed by the CFL condition; +inf when nothing moves.
  double stable_dt(const TransportCoefficients& coeffs) const;

  /// phi * sum_j S_j r_j dr, the radially weighted stored volume per radian.
  double storage(std::span<const double> s, double porosity) const;

 private:
  ScenarioConfig cfg_;
  SolverConfig scfg_;
  Grid grid_;
};

/// Heun step bookkeeping: net volume entering through the boundaries.
struct StepLedger {
  double dt = 0.0;
  double net_inflow = 0.0;  // dt * average over stages of (inflow - outflow)
};

/// Stateful second-order Runge-Kutta integrator for one realisation.
class TransportSolver {
 public:
  TransportSolver(const UncertainInput& omega, const ScenarioConfig& cfg,
                  const SolverConfig& scfg);

  double stable_dt() const { return op_.stable_dt(coeffs_); }
  /// Throws NumericError when dt exceeds the CFL bound.
  StepLedger step(double dt);
  /// Marches to the configured end time with a constant step.
  SaturationField run_to_end();

  const std::vector<double>& state() const { return state_; }
  void set_state(std::span<const double> values);
  double time() const { return time_; }
  double storage() const { return op_.storage(state_, coeffs_.porosity); }
  const TransportOperator& op() const { return op_; }
  const TransportCoefficients& coefficients() const { return coeffs_; }

 private:
  TransportOperator op_;
  TransportCoefficients coeffs_;
  std::vector<double> state_;
  std::vector<double> k1_, k2_, stage_;
  double time_ = 0.0;
};

/// Number of equal steps needed to reach t_end under the CFL bound.
std::size_t step_count(double t_end, double dt_max);

SaturationField step_rk2(const SaturationField& field, double dt, const UncertainInput& omega,
                         const ScenarioConfig& cfg, const SolverConfig& scfg);

/// The deterministic model run: saturation at the end time from Ŝ(.,0) = 0.
SaturationField simulate(const UncertainInput& omega, const ScenarioConfig& cfg,
                         const SolverConfig& scfg);

}  // namespace uqbench::solver
