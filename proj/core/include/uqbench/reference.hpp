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
#include <vector>

#include "uqbench/moments.hpp"
#include "uqbench/run_cache.hpp"
#include "uqbench/stochastic.hpp"

namespace uqbench::reference {

/// Monte-Carlo statistics of the model over every sample. Individual runs go
/// through the runner's cache; pass `runs` to also receive them in sample order.
MomentField run_reference(const stochastic::SampleSet& set, ModelRunner& runner,
                          std::vector<std::vector<double>>* runs = nullptr);

MomentField run_reference(const stochastic::SampleSet& set, const ScenarioConfig& cfg,
                          const SolverConfig& scfg);

/// Inputs with every coordinate except `dim` (1-based) frozen at its nominal value.
std::vector<UncertainInput> single_factor_inputs(const stochastic::SampleSet& set, std::size_t dim,
                                                 const ScenarioConfig& cfg);

/// Reference with only dimension `dim` random.
MomentField single_factor_reference(const stochastic::SampleSet& set, std::size_t dim,
                                    ModelRunner& runner);

}  // namespace uqbench::reference
