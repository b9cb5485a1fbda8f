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

#include <filesystem>
#include <string>

#include "uqbench/apc.hpp"
#include "uqbench/hsg.hpp"
#include "uqbench/physics.hpp"
#include "uqbench/solver.hpp"
#include "uqbench/sparsegrid.hpp"
#include "uqbench/vkoga.hpp"

namespace uqbench::io {

/// Scenario document: a JSON object whose keys are the parameter-table names
/// ("CO2 density", "Injection rate", ...) in the table's units (rates in
/// m^3/d, time in days, pressures in bar) plus "Number of cells". Missing
/// keys keep their defaults; unknown keys are a ConfigError.
physics::ScenarioConfig scenario_from_json(const std::string& text);
physics::ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const physics::ScenarioConfig& cfg);

/// Solver settings object: "cfl", "limiter_theta", "t_end_days", "source_rate".
solver::SolverConfig solver_from_json(const std::string& text);

void save_pce(const apc::PceSurrogate& s, const std::filesystem::path& path);
apc::PceSurrogate load_pce(const std::filesystem::path& path);

void save_sparse_grid(const sparsegrid::SparseGridSurrogate& s, const std::filesystem::path& path);
sparsegrid::SparseGridSurrogate load_sparse_grid(const std::filesystem::path& path);

void save_kernel_model(const vkoga::KernelModel& m, const std::filesystem::path& path);
vkoga::KernelModel load_kernel_model(const std::filesystem::path& path);

void save_hsg(const hsg::HsgSurrogate& s, const std::filesystem::path& path);
hsg::HsgSurrogate load_hsg(const std::filesystem::path& path);

}  // namespace uqbench::io
