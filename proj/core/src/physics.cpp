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

#include "uqbench/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uqbench/errors.hpp"

namespace uqbench::physics {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be strictly positive and finite");
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  require_positive(rho_g, "rho_g");
  require_positive(rho_w, "rho_w");
  require_positive(mu_n, "mu_n");
  require_positive(mu_w, "mu_w");
  require_positive(K_A, "K_A");
  require_positive(phi0, "phi0");
  require_positive(Q, "Q");
  require_positive(r_min, "r_min");
  require_positive(r_max, "r_max");
  require_positive(T_end, "T_end");
  require_positive(S_left, "S_left");
  require_positive(p_max, "p_max");
  require_positive(p_min, "p_min");
  require_positive(lambda_mean, "lambda_mean");
  if (phi0 >= 1.0) throw ConfigError("phi0 must be below 1");
  if (S_left > 1.0) throw ConfigError("S_left must lie in (0,1]");
  if (Sr_w < 0.0 || Sr_n < 0.0 || Sr_w + Sr_n >= 1.0) {
    throw ConfigError("residual saturations must satisfy 0 <= Sr_w + Sr_n < 1");
  }
  if (p_max <= p_min) throw ConfigError("p_max must exceed p_min");
  if (r_max <= r_min) throw ConfigError("r_max must exceed r_min");
  if (n_cells < 2) throw ConfigError("n_cells must be at least 2");
}

void validate(const UncertainInput& omega) {
  if (!std::isfinite(omega.omega1) || !std::isfinite(omega.omega2) ||
      !std::isfinite(omega.omega3)) {
    throw DomainError("uncertain input has non-finite components");
  }
  if (omega.omega1 <= -1.0) {
    throw DomainError("omega1 must exceed -1 (positive injection), got " +
                      std::to_string(omega.omega1));
  }
  if (omega.omega2 <= 0.0) {
    throw DomainError("omega2 (relative-permeability exponent) must be positive, got " +
                      std::to_string(omega.omega2));
  }
  if (omega.omega3 <= 0.0 || omega.omega3 >= 1.0) {
    throw DomainError("omega3 (porosity) must lie in (0,1), got " +
                      std::to_string(omega.omega3));
  }
}

UncertainInput nominal_input(const ScenarioConfig& cfg) { return {0.0, 2.0, cfg.phi0}; }

double effective_saturation(double S, double Sr) {
  if (Sr >= 1.0) throw ConfigError("residual saturation must be below 1");
  return std::clamp((S - Sr) / (1.0 - Sr), 0.0, 1.0);
}

RelPerm rel_perm(double S_hat, double omega2) {
  return {std::pow(S_hat, omega2), std::pow(1.0 - S_hat, omega2)};
}

double fractional_flow(double S_hat, double omega2, const ScenarioConfig& cfg) {
  const double s = std::clamp(S_hat, 0.0, 1.0);
  const auto [kr_n, kr_w] = rel_perm(s, omega2);
  const double lambda_n = kr_n / cfg.mu_n;
  const double lambda_w = kr_w / cfg.mu_w;
  const double total = lambda_n + lambda_w;
  if (total == 0.0) return s > 0.5 ? 1.0 : 0.0;
  return lambda_n / total;
}

FluxValue fractional_flow_with_derivative(double S_hat, double omega2, double mu_n,
                                          double mu_w) {
  const double s = std::clamp(S_hat, 0.0, 1.0);
  const double sw = 1.0 - s;
  const double a = std::pow(s, omega2) / mu_n;
  const double b = std::pow(sw, omega2) / mu_w;
  const double total = a + b;
  if (total == 0.0) return {s > 0.5 ? 1.0 : 0.0, 0.0};
  // d/ds of the two mobilities; the power laws are reused away from the endpoints.
  const double da = s > 0.0 ? omega2 * a / s : omega2 * std::pow(s, omega2 - 1.0) / mu_n;
  const double db = sw > 0.0 ? omega2 * b / sw : omega2 * std::pow(sw, omega2 - 1.0) / mu_w;
  return {a / total, (da * b + a * db) / (total * total)};
}

double max_flux_derivative(double omega2, const ScenarioConfig& cfg) {
  constexpr int kSamples = 2001;
  double best = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double s = static_cast<double>(k) / (kSamples - 1);
    best = std::max(best, fractional_flow_with_derivative(s, omega2, cfg.mu_n, cfg.mu_w).df);
  }
  return best;
}

double compute_cp(const ScenarioConfig& cfg) {
  if (cfg.r_max <= 1.0) throw DomainError("r_max must exceed 1 m (ln r_max must be positive)");
  return (cfg.p_max - cfg.p_min) * cfg.K_A * cfg.lambda_mean / (cfg.Q * std::log(cfg.r_max));
}

double radial_flux(double omega1, const ScenarioConfig& cfg) {
  return compute_cp(cfg) * cfg.Q * (1.0 + omega1);
}

double pressure_profile(double r, double omega1, const ScenarioConfig& cfg) {
  if (!(r >= 1.0 && r <= cfg.r_max)) {
    throw DomainError("radius " + std::to_string(r) + " outside [1, r_max]");
  }
  return cfg.p_max - radial_flux(omega1, cfg) / (cfg.lambda_mean * cfg.K_A) * std::log(r);
}

}  // namespace uqbench::physics
