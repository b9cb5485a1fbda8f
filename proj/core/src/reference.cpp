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

#include "uqbench/reference.hpp"

#include "uqbench/errors.hpp"

namespace uqbench::reference {

MomentField run_reference(const stochastic::SampleSet& set, ModelRunner& runner,
                          std::vector<std::vector<double>>* runs) {
  if (set.samples.empty()) throw ConfigError("reference needs a nonempty sample set");
  auto outputs = runner.run(set.samples);
  MomentField field = moments_of(outputs, runner.grid(), runner.end_time());
  if (runs) *runs = std::move(outputs);
  return field;
}

MomentField run_reference(const stochastic::SampleSet& set, const ScenarioConfig& cfg,
                          const SolverConfig& scfg) {
  ModelRunner runner(cfg, scfg);
  return run_reference(set, runner);
}

std::vector<UncertainInput> single_factor_inputs(const stochastic::SampleSet& set, std::size_t dim,
                                                 const ScenarioConfig& cfg) {
  if (dim < 1 || dim > stochastic::kDims) throw ConfigError("factor dimension must be 1, 2 or 3");
  const UncertainInput nominal = physics::nominal_input(cfg);
  std::vector<UncertainInput> inputs(set.samples.size(), nominal);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    stochastic::set_coordinate(inputs[i], dim - 1,
                               stochastic::coordinate(set.samples[i], dim - 1));
  }
  return inputs;
}

MomentField single_factor_reference(const stochastic::SampleSet& set, std::size_t dim,
                                    ModelRunner& runner) {
  if (set.samples.empty()) throw ConfigError("reference needs a nonempty sample set");
  const auto inputs = single_factor_inputs(set, dim, runner.scenario());
  const auto outputs = runner.run(inputs);
  return moments_of(outputs, runner.grid(), runner.end_time());
}

}  // namespace uqbench::reference
