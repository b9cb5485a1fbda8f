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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "uqbench/solver.hpp"
#include "uqbench/work_pool.hpp"

namespace uqbench {

using physics::ScenarioConfig;
using physics::UncertainInput;
using solver::SolverConfig;

/// FNV-1a digest of every field that influences a model run.
std::uint64_t config_hash(const ScenarioConfig& cfg, const SolverConfig& scfg);
std::uint64_t run_key(const UncertainInput& omega, std::uint64_t config_digest);
std::string hex_digest(std::uint64_t value);

/// Content-addressed store of solver outputs. Hits return the stored vector
/// bit for bit. With a directory, entries persist as <key>.run files:
///   "UQRC" | u32 version | u32 length | 3 x f64 omega | length x f64 values
class RunCache {
 public:
  RunCache() = default;
  explicit RunCache(std::filesystem::path dir);

  std::optional<std::vector<double>> find(std::uint64_t key, const UncertainInput& omega);
  void store(std::uint64_t key, const UncertainInput& omega, const std::vector<double>& values);

  std::size_t size() const { return memory_.size(); }
  const std::optional<std::filesystem::path>& directory() const { return dir_; }

 private:
  std::filesystem::path file_for(std::uint64_t key) const;

  std::optional<std::filesystem::path> dir_;
  std::unordered_map<std::uint64_t, std::vector<double>> memory_;
};

/// Distinct run keys requested on behalf of one surrogate.
struct RunTracker {
  std::set<std::uint64_t> keys;
  std::size_t distinct() const { return keys.size(); }
};

/// Evaluates the deterministic model for batches of inputs through the
/// cache; misses are solved concurrently on the work pool.
class ModelRunner {
 public:
  ModelRunner(const ScenarioConfig& cfg, const SolverConfig& scfg,
              std::shared_ptr<RunCache> cache = std::make_shared<RunCache>(),
              WorkPool pool = WorkPool());

  /// Outputs in input order. A failing run aborts the batch with a
  /// NumericError naming the offending input.
  std::vector<std::vector<double>> run(std::span<const UncertainInput> inputs,
                                       RunTracker* tracker = nullptr);
  std::vector<double> run_one(const UncertainInput& omega, RunTracker* tracker = nullptr);

  /// Number of actual solver executions (cache misses) so far.
  std::size_t solver_invocations() const { return invocations_.load(); }

  const ScenarioConfig& scenario() const { return cfg_; }
  const SolverConfig& settings() const { return scfg_; }
  const solver::Grid& grid() const { return grid_; }
  double end_time() const { return scfg_.end_time(cfg_); }
  std::uint64_t digest() const { return digest_; }
  const WorkPool& pool() const { return pool_; }

 private:
  ScenarioConfig cfg_;
  SolverConfig scfg_;
  solver::Grid grid_;
  std::uint64_t digest_;
  std::shared_ptr<RunCache> cache_;
  WorkPool pool_;
  std::atomic<std::size_t> invocations_{0};
};

}  // namespace uqbench
