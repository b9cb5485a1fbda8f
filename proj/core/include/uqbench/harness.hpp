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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uqbench/moments.hpp"
#include "uqbench/physics.hpp"
#include "uqbench/solver.hpp"
#include "uqbench/stochastic.hpp"

namespace uqbench::harness {

/// Distances between two moment fields on the same grid: discrete L2
/// sqrt(dr sum (a - b)^2), the same relative to the reference norm, and max.
struct ErrorNorms {
  double mean = 0.0;
  double std = 0.0;
  double rel_mean = 0.0;
  double rel_std = 0.0;
  double max_mean = 0.0;
  double max_std = 0.0;
};

/// Throws ConfigError when the grids differ.
ErrorNorms error_norm(const MomentField& candidate, const MomentField& reference);

/// sqrt(dr sum v^2).
double l2_norm(const std::vector<double>& v, double dr);

struct ErrorReport {
  std::string method;
  std::string variant;
  std::string parameter;  // e.g. "order=2", "n=64"
  std::size_t cost = 0;   // distinct model runs, or stochastic elements for hsg
  ErrorNorms errors;
  double wall_time = 0.0;
  std::string config_hash;
};

/// One entry of the plan's "methods" list.
struct MethodPlan {
  std::string method;   // apc | asg | vkoga | hsg
  std::string variant;  // pcm|ft, boundary|modified, delta convention, (empty)
  std::vector<std::size_t> orders;    // apc
  std::vector<std::size_t> budgets;   // asg
  int degree_cap = 1;                 // asg
  std::vector<double> deltas;         // vkoga
  std::vector<std::size_t> n;         // vkoga
  std::size_t resolution = 50;        // vkoga candidate grid
  double jitter = 0.0;                // vkoga diagonal regularization
  std::vector<std::size_t> nr;        // hsg
  std::vector<std::size_t> no;        // hsg
  std::size_t quadrature = 0;         // hsg, 0 = N_o + 2
  bool porosity_split = false;        // hsg
  double node_tolerance = 0.5;        // hsg
};

struct Plan {
  physics::ScenarioConfig scenario;
  solver::SolverConfig solver;
  std::optional<std::filesystem::path> samples_file;
  std::size_t generate_n = 0;
  std::uint64_t generate_seed = 0;
  std::optional<std::filesystem::path> cache_dir;
  std::filesystem::path out_dir = "uqbench-out";
  std::vector<MethodPlan> methods;
};

/// Reads a JSON plan. Relative paths resolve against the plan's directory.
Plan load_plan(const std::filesystem::path& path);
Plan plan_from_json(const std::string& text, const std::filesystem::path& base_dir);

struct Failure {
  std::string method;
  std::string variant;
  std::string parameter;
  std::string message;
};

struct BenchmarkResult {
  MomentField reference;
  std::vector<ErrorReport> reports;
  std::vector<Failure> failures;
  std::size_t solver_invocations = 0;
};

stochastic::SampleSet plan_samples(const Plan& plan);

/// Runs the reference and every planned surrogate through one run cache and
/// writes convergence.csv, timing.csv, failures.csv, reference_moments.csv
/// and moments/<method>_<variant>_<parameter>.csv into the output directory.
/// Stage failures are recorded and the remaining entries still run.
BenchmarkResult run_benchmark(const Plan& plan);

/// Reads convergence.csv back.
std::vector<ErrorReport> read_convergence(const std::filesystem::path& path);

}  // namespace uqbench::harness
