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

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "uqbench/moments.hpp"
#include "uqbench/run_cache.hpp"
#include "uqbench/stochastic.hpp"

namespace uqbench::sparsegrid {

inline constexpr std::size_t kMaxDim = 3;

enum class Variant { kInterior, kBoundary, kModified };

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

/// Level-index pair. Entries beyond the grid dimension stay at (1, 1).
struct LevelIndex {
  std::array<int, kMaxDim> level{1, 1, 1};
  std::array<int, kMaxDim> index{1, 1, 1};

  auto operator<=>(const LevelIndex&) const = default;
};

/// Grid point coordinate 2^-l i in one dimension.
double coordinate_1d(int level, int index);

/// One-dimensional basis function of the variant. `degree_cap` > 1 enables
/// polynomial pieces of degree min(level + 1, degree_cap).
double basis_1d(Variant variant, int level, int index, double x, int degree_cap = 1);

/// Hierarchical parents of `li` in dimension `dim`.
std::vector<LevelIndex> parents(const LevelIndex& li, std::size_t dim, Variant variant);
/// Hierarchical successors (l + 1, 2i +- 1) in dimension `dim`; a level-0
/// boundary point has the single successor (1, 1).
std::vector<LevelIndex> successors(const LevelIndex& li, std::size_t dim);

class SparseGrid {
 public:
  SparseGrid() = default;
  SparseGrid(std::size_t dim, Variant variant, int degree_cap = 1);

  std::size_t dim() const { return dim_; }
  Variant variant() const { return variant_; }
  int degree_cap() const { return degree_cap_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<LevelIndex>& points() const { return points_; }
  const LevelIndex& point(std::size_t k) const { return points_[k]; }

  bool contains(const LevelIndex& li) const { return lookup_.count(li) != 0; }
  /// Appends the point unless already present; returns whether it was new.
  bool add(const LevelIndex& li);

  std::array<double, kMaxDim> coordinates(std::size_t k) const;
  double basis(std::size_t k, std::span<const double> x) const;

 private:
  std::size_t dim_ = 0;
  Variant variant_ = Variant::kModified;
  int degree_cap_ = 1;
  std::vector<LevelIndex> points_;
  std::map<LevelIndex, std::size_t> lookup_;
};

/// Regular sparse grid: sum_j max(l_j, 1) <= level + dim - 1.
SparseGrid regular_grid(int level, std::size_t dim, Variant variant, int degree_cap = 1);

bool is_downward_closed(const SparseGrid& grid);
/// Every point has none or both successors in each dimension.
bool is_balanced(const SparseGrid& grid);

/// Adds missing ancestors and partner successors until both properties hold.
/// Returns the added points in insertion order.
std::vector<LevelIndex> close_and_balance(SparseGrid& grid);

/// Hierarchical surpluses so that the interpolant matches `values[k]` at
/// point k. Throws ConfigError for a grid that is not downward-closed.
std::vector<std::vector<double>> hierarchize(const SparseGrid& grid,
                                             const std::vector<std::vector<double>>& values);

/// Interpolant from surpluses at a unit-cube point.
std::vector<double> interpolate(const SparseGrid& grid,
                                const std::vector<std::vector<double>>& surpluses,
                                std::span<const double> x);

/// w_k = sqrt(mean over `points` of phi_k^2); points are in the unit cube.
std::vector<double> density_weights(const SparseGrid& grid,
                                    const std::vector<std::array<double, kMaxDim>>& points);

struct Candidate {
  std::size_t point = 0;
  double score = 0.0;
};

/// Points missing a successor, by descending |v| w with lexicographic tie-break.
std::vector<Candidate> rank_candidates(const SparseGrid& grid,
                                       const std::vector<std::vector<double>>& surpluses,
                                       std::span<const double> weights);

/// Adds every successor of the top `k` candidates, then closes and balances.
std::vector<LevelIndex> refine(SparseGrid& grid, const std::vector<Candidate>& ranked,
                               std::size_t k = 2);

struct SparseGridSurrogate {
  SparseGrid grid;
  std::vector<std::vector<double>> surpluses;
  stochastic::Box box;

  std::vector<double> evaluate(const UncertainInput& omega) const;
  std::size_t cost() const { return grid.size(); }
};

struct AdaptiveOptions {
  Variant variant = Variant::kModified;
  std::size_t budget = 100;
  /// Grid-size budgets at which a snapshot is kept; `budget` is always added.
  std::vector<std::size_t> checkpoints;
  int degree_cap = 1;
  std::size_t refine_count = 2;
};

struct IterationLog {
  std::size_t iteration = 0;
  std::size_t grid_size = 0;
};

struct AdaptiveResult {
  /// One surrogate per checkpoint, ascending: the largest grid not exceeding it.
  std::vector<std::pair<std::size_t, SparseGridSurrogate>> snapshots;
  std::vector<IterationLog> log;

  const SparseGridSurrogate& final_surrogate() const { return snapshots.back().second; }
};

/// Start from the level-1 regular grid and refine until the next step would
/// exceed the budget or nothing is left to refine.
AdaptiveResult adaptive_loop(const stochastic::SampleSet& set, const AdaptiveOptions& options,
                             ModelRunner& runner, RunTracker* tracker = nullptr);

/// Componentwise Θ bounds with a 1% margin.
stochastic::Box input_box(const stochastic::SampleSet& set);

MomentField sg_moments(const SparseGridSurrogate& surrogate, const stochastic::SampleSet& set,
                       const solver::Grid& grid, double t, bool clamp = true);

}  // namespace uqbench::sparsegrid
