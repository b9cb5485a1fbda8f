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

namespace uqbench::physics {

inline constexpr double kSecondsPerDay = 86400.0;

/// Deterministic constants of the radial CO2 injection scenario, in SI units.
/// Defaults reproduce the reference parameter table.
struct ScenarioConfig {
  double rho_g = 479.0;           // kg/m^3
  double rho_w = 1045.0;          // kg/m^3
  double mu_n = 3.950e-5;         // Pa s, CO2
  double mu_w = 2.535e-4;         // Pa s, brine
  double K_A = 2.0e-14;           // m^2
  double phi0 = 0.15;             // nominal porosity
  double Sr_w = 0.2;
  double Sr_n = 0.05;
  double well_radius = 0.15;      // m, informational only
  double Q = 1600.0 / kSecondsPerDay;  // m^3/s
  double r_min = 1.0;             // m
  double r_max = 500.0;           // m
  double T_end = 100.0 * kSecondsPerDay;  // s
  double S_left = 0.8;            // effective gas saturation at the inflow
  double p_max = 320.0e5;         // Pa
  double p_min = 300.0e5;         // Pa
  double lambda_mean = 1.0e4;     // (Pa s)^-1
  std::size_t n_cells = 250;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// One realisation of the uncertain inputs.
struct UncertainInput {
  double omega1 = 0.0;  // injection-rate perturbation
  double omega2 = 2.0;  // relative-permeability exponent
  double omega3 = 0.15; // porosity

  friend bool operator==(const UncertainInput&, const UncertainInput&) = default;
};

/// Throws DomainError if omega2 <= 0, omega3 outside (0,1) or omega1 <= -1.
void validate(const UncertainInput& omega);

/// Nominal input: no rate perturbation, quadratic relative permeabilities,
/// porosity from the scenario.
UncertainInput nominal_input(const ScenarioConfig& cfg);

struct RelPerm {
  double kr_n;
  double kr_w;
};

double effective_saturation(double S, double Sr);

/// Power-law pair in the effective gas saturation: kr_n = s^w, kr_w = (1-s)^w.
RelPerm rel_perm(double S_hat, double omega2);

/// Gas fractional flow f_g = lambda_n / (lambda_n + lambda_w).
double fractional_flow(double S_hat, double omega2, const ScenarioConfig& cfg);

/// Value and derivative of the fractional flow with respect to S_hat.
struct FluxValue {
  double f;
  double df;
};

/// Evaluates f_g and df_g/dS together, sharing the two power evaluations.
/// S_hat is clamped to [0,1].
FluxValue fractional_flow_with_derivative(double S_hat, double omega2, double mu_n,
                                          double mu_w);

/// max_{s in [0,1]} f_g'(s), sampled on a fixed 2001-point lattice.
double max_flux_derivative(double omega2, const ScenarioConfig& cfg);

/// cp = (p_max - p_min) K_A lambda / (Q ln r_max).
double compute_cp(const ScenarioConfig& cfg);

/// u(omega1) = cp Q (1 + omega1), the constant radial flux (m^2/s).
double radial_flux(double omega1, const ScenarioConfig& cfg);

/// p(r) = p_max - u(omega1) / (lambda K_A) ln r on [1, r_max].
double pressure_profile(double r, double omega1, const ScenarioConfig& cfg);

}  // namespace uqbench::physics
