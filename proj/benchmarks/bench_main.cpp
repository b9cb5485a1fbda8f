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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "uqbench/hsg.hpp"
#include "uqbench/physics.hpp"
#include "uqbench/solver.hpp"
#include "uqbench/sparsegrid.hpp"
#include "uqbench/stochastic.hpp"
#include "uqbench/vkoga.hpp"

using namespace uqbench;

namespace {

physics::ScenarioConfig scenario(std::size_t cells) {
  physics::ScenarioConfig cfg;
  cfg.n_cells = cells;
  return cfg;
}

void BM_NumericalFlux(benchmark::State& state) {
  const physics::ScenarioConfig cfg;
  double s = 0.0;
  for (auto _ : state) {
    s += 1e-6;
    if (s > 0.8) s = 0.0;
    benchmark::DoNotOptimize(solver::numerical_flux(s, 0.8 - s, 2.0, cfg));
  }
}
BENCHMARK(BM_NumericalFlux);

void BM_SolverStep(benchmark::State& state) {
  const auto cfg = scenario(static_cast<std::size_t>(state.range(0)));
  solver::TransportSolver ts(physics::nominal_input(cfg), cfg, solver::SolverConfig{});
  const double dt = ts.stable_dt();
  for (int i = 0; i < 200; ++i) ts.step(dt);
  const auto snapshot = ts.state();
  for (auto _ : state) {
    ts.set_state(snapshot);
    benchmark::DoNotOptimize(ts.step(dt));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolverStep)->Arg(100)->Arg(250)->Arg(1000);

void BM_FullRun(benchmark::State& state) {
  const auto cfg = scenario(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver::simulate(physics::nominal_input(cfg), cfg, {}));
  }
}
BENCHMARK(BM_FullRun)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_GreedyStep(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  std::vector<vkoga::Point3> cloud(static_cast<std::size_t>(state.range(0)));
  for (auto& p : cloud) p = {u(rng), u(rng), u(rng)};
  for (auto _ : state) {
    vkoga::PGreedy greedy(vkoga::KernelSpec{0.2}, cloud, 64);
    benchmark::DoNotOptimize(greedy.run(64));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_GreedyStep)->Arg(10000)->Arg(86000)->Unit(benchmark::kMillisecond);

void BM_Hierarchize(benchmark::State& state) {
  const auto grid = sparsegrid::regular_grid(static_cast<int>(state.range(0)), 3,
                                             sparsegrid::Variant::kModified);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u;
  std::vector<std::vector<double>> values(grid.size(), std::vector<double>(250));
  for (auto& row : values) {
    for (auto& v : row) v = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(sparsegrid::hierarchize(grid, values));
  state.counters["points"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_Hierarchize)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_HsgElementRhs(benchmark::State& state) {
  const auto cfg = scenario(100);
  const auto set =
      stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(), 500, 3);
  const hsg::HsgBasis basis(1, static_cast<std::size_t>(state.range(0)));
  const hsg::ElementOperator op(basis, 0, static_cast<std::size_t>(state.range(0)) + 2,
                                hsg::basis_box(set), cfg, solver::SolverConfig{});
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(100, static_cast<Eigen::Index>(basis.n_modes()));
  c.col(0).setConstant(0.1);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    op.rhs(c, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_HsgElementRhs)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
