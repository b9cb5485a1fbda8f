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

#include "uqbench/sparsegrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uqbench/errors.hpp"

namespace uqbench::sparsegrid {

namespace {

constexpr int kMaxLevel = 30;

double hat(int level, int index, double x) {
  const double scaled = std::ldexp(x, level) - static_cast<double>(index);
  return std::max(0.0, 1.0 - std::abs(scaled));
}

int parent_index(int index) {
  const int up = (index + 1) / 2;
  return (up % 2 == 1) ? up : (index - 1) / 2;
}

// Polynomial piece vanishing on the support ends and on further ancestors,
// equal to one at the grid point.
double polynomial_piece(int level, int index, double x, int degree) {
  const double h = std::ldexp(1.0, -level);
  const double center = index * h;
  if (x <= center - h || x >= center + h) return 0.0;
  std::vector<double> roots{center - h, center + h};
  int l = level;
  int i = index;
  while (static_cast<int>(roots.size()) < degree + 1 && l > 1) {
    i = parent_index(i);
    --l;
    const double r = coordinate_1d(l, i);
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }
  for (double r : {0.0, 1.0}) {
    if (static_cast<int>(roots.size()) >= degree + 1) break;
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }
  const std::size_t n_roots = std::min<std::size_t>(roots.size(), static_cast<std::size_t>(degree));
  double value = 1.0;
  for (std::size_t k = 0; k < n_roots; ++k) value *= (x - roots[k]) / (center - roots[k]);
  return value;
}

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

Variant parse_variant(const std::string& name) {
  if (name == "interior") return Variant::kInterior;
  if (name == "boundary") return Variant::kBoundary;
  if (name == "modified") return Variant::kModified;
  throw ConfigError("unknown sparse-grid variant '" + name + "' (interior|boundary|modified)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kInterior: return "interior";
    case Variant::kBoundary: return "boundary";
    case Variant::kModified: return "modified";
  }
  return "modified";
}

double coordinate_1d(int level, int index) { return std::ldexp(static_cast<double>(index), -level); }

double basis_1d(Variant variant, int level, int index, double x, int degree_cap) {
  if (level == 0) return index == 0 ? std::max(0.0, 1.0 - x) : std::max(0.0, x);
  if (variant == Variant::kModified) {
    if (level == 1) return 1.0;
    const int last = (1 << level) - 1;
    if (index == 1) return std::max(0.0, 2.0 - std::ldexp(x, level));
    if (index == last) return std::max(0.0, std::ldexp(x, level) - index + 1.0);
  }
  const int degree = std::min(level + 1, degree_cap);
  if (degree <= 1) return hat(level, index, x);
  return polynomial_piece(level, index, x, degree);
}

std::vector<LevelIndex> parents(const LevelIndex& li, std::size_t dim, Variant variant) {
  std::vector<LevelIndex> out;
  const int l = li.level[dim];
  if (l >= 2) {
    LevelIndex p = li;
    p.level[dim] = l - 1;
    p.index[dim] = parent_index(li.index[dim]);
    out.push_back(p);
  } else if (l == 1 && variant == Variant::kBoundary) {
    for (int i : {0, 1}) {
      LevelIndex p = li;
      p.level[dim] = 0;
      p.index[dim] = i;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<LevelIndex> successors(const LevelIndex& li, std::size_t dim) {
  std::vector<LevelIndex> out;
  const int l = li.level[dim];
  if (l == 0) {
    LevelIndex s = li;
    s.level[dim] = 1;
    s.index[dim] = 1;
    out.push_back(s);
    return out;
  }
  if (l >= kMaxLevel) return out;
  for (int delta : {-1, 1}) {
    LevelIndex s = li;
    s.level[dim] = l + 1;
    s.index[dim] = 2 * li.index[dim] + delta;
    out.push_back(s);
  }
  return out;
}

SparseGrid::SparseGrid(std::size_t dim, Variant variant, int degree_cap)
    : dim_(dim), variant_(variant), degree_cap_(degree_cap) {
  if (dim == 0 || dim > kMaxDim) throw ConfigError("sparse-grid dimension must be 1..3");
  if (degree_cap < 1 || degree_cap > 3) throw ConfigError("polynomial degree cap must be 1..3");
}

bool SparseGrid::add(const LevelIndex& li) {
  auto [it, inserted] = lookup_.emplace(li, points_.size());
  if (inserted) points_.push_back(li);
  return inserted;
}

std::array<double, kMaxDim> SparseGrid::coordinates(std::size_t k) const {
  std::array<double, kMaxDim> x{0.5, 0.5, 0.5};
  for (std::size_t d = 0; d < dim_; ++d) {
    x[d] = coordinate_1d(points_[k].level[d], points_[k].index[d]);
  }
  return x;
}

double SparseGrid::basis(std::size_t k, std::span<const double> x) const {
  const LevelIndex& li = points_[k];
  double value = 1.0;
  for (std::size_t d = 0; d < dim_ && value != 0.0; ++d) {
    value *= basis_1d(variant_, li.level[d], li.index[d], x[d], degree_cap_);
  }
  return value;
}

SparseGrid regular_grid(int level, std::size_t dim, Variant variant, int degree_cap) {
  if (level < 1) throw ConfigError("regular sparse grid needs level >= 1");
  SparseGrid grid(dim, variant, degree_cap);
  const int min_level = variant == Variant::kBoundary ? 0 : 1;
  const int limit = level + static_cast<int>(dim) - 1;
  LevelIndex li;
  // Enumerate levels lexicographically, then indices.
  std::vector<std::array<int, kMaxDim>> levels;
  std::array<int, kMaxDim> l{1, 1, 1};
  auto enumerate = [&](auto&& self, std::size_t d, int used) -> void {
    if (d == dim) {
      levels.push_back(l);
      return;
    }
    for (int v = min_level; std::max(v, 1) + used <= limit - static_cast<int>(dim - d - 1); ++v) {
      l[d] = v;
      self(self, d + 1, used + std::max(v, 1));
    }
    l[d] = 1;
  };
  enumerate(enumerate, 0, 0);
  std::sort(levels.begin(), levels.end(), [&](const auto& a, const auto& b) {
    const int sa = std::accumulate(a.begin(), a.begin() + static_cast<long>(dim), 0);
    const int sb = std::accumulate(b.begin(), b.begin() + static_cast<long>(dim), 0);
    return sa != sb ? sa < sb : a < b;
  });
  for (const auto& lv : levels) {
    std::array<int, kMaxDim> i{1, 1, 1};
    auto indices = [&](auto&& self, std::size_t d) -> void {
      if (d == dim) {
        li.level = lv;
        li.index = i;
        grid.add(li);
        return;
      }
      if (lv[d] == 0) {
        for (int v : {0, 1}) {
          i[d] = v;
          self(self, d + 1);
        }
      } else {
        for (int v = 1; v < (1 << lv[d]); v += 2) {
          i[d] = v;
          self(self, d + 1);
        }
      }
      i[d] = 1;
    };
    indices(indices, 0);
  }
  return grid;
}

bool is_downward_closed(const SparseGrid& grid) {
  for (const auto& li : grid.points()) {
    for (std::size_t d = 0; d < grid.dim(); ++d) {
      for (const auto& p : parents(li, d, grid.variant())) {
        if (!grid.contains(p)) return false;
      }
    }
  }
  return true;
}

bool is_balanced(const SparseGrid& grid) {
  for (const auto& li : grid.points()) {
    for (std::size_t d = 0; d < grid.dim(); ++d) {
      const auto succ = successors(li, d);
      const auto present = std::count_if(succ.begin(), succ.end(),
                                         [&](const LevelIndex& s) { return grid.contains(s); });
      if (present != 0 && present != static_cast<long>(succ.size())) return false;
    }
  }
  return true;
}

std::vector<LevelIndex> close_and_balance(SparseGrid& grid) {
  std::vector<LevelIndex> added;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const LevelIndex li = grid.point(k);
      for (std::size_t d = 0; d < grid.dim(); ++d) {
        for (const auto& p : parents(li, d, grid.variant())) {
          if (grid.add(p)) {
            added.push_back(p);
            changed = true;
          }
        }
        const auto succ = successors(li, d);
        const bool any = std::any_of(succ.begin(), succ.end(),
                                     [&](const LevelIndex& s) { return grid.contains(s); });
        if (!any) continue;
        for (const auto& s : succ) {
          if (grid.add(s)) {
            added.push_back(s);
            changed = true;
          }
        }
      }
    }
  }
  return added;
}

std::vector<std::vector<double>> hierarchize(const SparseGrid& grid,
                                             const std::vector<std::vector<double>>& values) {
  if (values.size() != grid.size()) throw ConfigError("one nodal value per grid point required");
  if (!is_downward_closed(grid)) throw ConfigError("hierarchization needs a downward-closed grid");
  const std::size_t n = grid.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto level_sum = [&](std::size_t k) {
    const auto& l = grid.point(k).level;
    return std::accumulate(l.begin(), l.begin() + static_cast<long>(grid.dim()), 0);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return level_sum(a) < level_sum(b); });
  std::vector<std::vector<double>> surplus(n);
  // Basis functions only reach points of componentwise finer or equal level,
  // so processing by level sum is a forward substitution.
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t k = order[a];
    const auto x = grid.coordinates(k);
    std::vector<double> v = values[k];
    for (std::size_t b = 0; b < a; ++b) {
      const std::size_t j = order[b];
      if (level_sum(j) == level_sum(k)) continue;
      const double phi = grid.basis(j, x);
      if (phi == 0.0) continue;
      for (std::size_t c = 0; c < v.size(); ++c) v[c] -= phi * surplus[j][c];
    }
    surplus[k] = std::move(v);
  }
  return surplus;
}

std::vector<double> interpolate(const SparseGrid& grid,
                                const std::vector<std::vector<double>>& surpluses,
                                std::span<const double> x) {
  std::vector<double> out(surpluses.empty() ? 0 : surpluses.front().size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double phi = grid.basis(k, x);
    if (phi == 0.0) continue;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += phi * surpluses[k][c];
  }
  return out;
}

std::vector<double> density_weights(const SparseGrid& grid,
                                    const std::vector<std::array<double, kMaxDim>>& points) {
  std::vector<double> w(grid.size(), 0.0);
  if (points.empty()) return w;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double acc = 0.0;
    for (const auto& x : points) {
      const double phi = grid.basis(k, x);
      acc += phi * phi;
    }
    w[k] = std::sqrt(acc / static_cast<double>(points.size()));
  }
  return w;
}

std::vector<Candidate> rank_candidates(const SparseGrid& grid,
                                       const std::vector<std::vector<double>>& surpluses,
                                       std::span<const double> weights) {
  std::vector<Candidate> out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    bool missing = false;
    for (std::size_t d = 0; d < grid.dim() && !missing; ++d) {
      for (const auto& s : successors(grid.point(k), d)) {
        if (!grid.contains(s)) {
          missing = true;
          break;
        }
      }
    }
    if (missing) out.push_back({k, norm2(surpluses[k]) * weights[k]});
  }
  std::sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return grid.point(a.point) < grid.point(b.point);
  });
  return out;
}

std::vector<LevelIndex> refine(SparseGrid& grid, const std::vector<Candidate>& ranked,
                               std::size_t k) {
  std::vector<LevelIndex> added;
  const std::size_t take = std::min(k, ranked.size());
  std::vector<LevelIndex> chosen;
  for (std::size_t c = 0; c < take; ++c) chosen.push_back(grid.point(ranked[c].point));
  for (const auto& li : chosen) {
    for (std::size_t d = 0; d < grid.dim(); ++d) {
      for (const auto& s : successors(li, d)) {
        if (grid.add(s)) added.push_back(s);
      }
    }
  }
  const auto closure = close_and_balance(grid);
  added.insert(added.end(), closure.begin(), closure.end());
  return added;
}

std::vector<double> SparseGridSurrogate::evaluate(const UncertainInput& omega) const {
  const auto x = box.to_unit(omega);
  return interpolate(grid, surpluses, x);
}

stochastic::Box input_box(const stochastic::SampleSet& set) {
  return stochastic::bounding_box(set).expanded(0.01);
}

AdaptiveResult adaptive_loop(const stochastic::SampleSet& set, const AdaptiveOptions& options,
                             ModelRunner& runner, RunTracker* tracker) {
  const stochastic::Box box = input_box(set);
  std::vector<std::array<double, kMaxDim>> unit;
  unit.reserve(set.size());
  for (const auto& s : set.samples) unit.push_back(box.to_unit(s));

  SparseGrid grid = regular_grid(1, stochastic::kDims, options.variant, options.degree_cap);
  if (options.budget < grid.size()) {
    throw ConfigError("budget " + std::to_string(options.budget) + " is below the initial grid size " +
                      std::to_string(grid.size()));
  }
  std::vector<std::size_t> checkpoints = options.checkpoints;
  checkpoints.push_back(options.budget);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.front() < grid.size()) {
    throw ConfigError("checkpoint " + std::to_string(checkpoints.front()) +
                      " is below the initial grid size " + std::to_string(grid.size()));
  }
  checkpoints.erase(std::upper_bound(checkpoints.begin(), checkpoints.end(), options.budget),
                    checkpoints.end());

  auto inputs_of = [&](const std::vector<LevelIndex>& pts, std::size_t first) {
    std::vector<UncertainInput> inputs;
    for (std::size_t k = first; k < first + pts.size(); ++k) {
      const auto x = grid.coordinates(k);
      inputs.push_back(box.from_unit({x[0], x[1], x[2]}));
    }
    return inputs;
  };

  std::vector<std::vector<double>> values = runner.run(inputs_of(grid.points(), 0), tracker);
  std::vector<double> weights = density_weights(grid, unit);

  AdaptiveResult result;
  std::size_t next_checkpoint = 0;
  std::size_t iteration = 0;
  result.log.push_back({iteration, grid.size()});
  while (true) {
    SparseGridSurrogate current{grid, hierarchize(grid, values), box};
    const auto ranked = rank_candidates(grid, current.surpluses, weights);
    SparseGrid trial = grid;
    const auto added = ranked.empty() ? std::vector<LevelIndex>{} : refine(trial, ranked,
                                                                           options.refine_count);
    const std::size_t new_size = added.empty() ? SIZE_MAX : trial.size();
    while (next_checkpoint < checkpoints.size() && new_size > checkpoints[next_checkpoint]) {
      result.snapshots.emplace_back(checkpoints[next_checkpoint], current);
      ++next_checkpoint;
    }
    if (next_checkpoint == checkpoints.size()) break;
    const std::size_t first = grid.size();
    grid = std::move(trial);
    auto fresh = runner.run(inputs_of(added, first), tracker);
    for (auto& v : fresh) values.push_back(std::move(v));
    SparseGrid only_new(grid.dim(), grid.variant(), grid.degree_cap());
    for (const auto& li : added) only_new.add(li);
    const auto w_new = density_weights(only_new, unit);
    weights.insert(weights.end(), w_new.begin(), w_new.end());
    result.log.push_back({++iteration, grid.size()});
  }
  return result;
}

MomentField sg_moments(const SparseGridSurrogate& surrogate, const stochastic::SampleSet& set,
                       const solver::Grid& grid, double t, bool clamp) {
  std::vector<std::vector<double>> outputs(set.size());
  WorkPool().parallel_for(set.size(), [&](std::size_t i) {
    outputs[i] = surrogate.evaluate(set.samples[i]);
  });
  MomentAccumulator acc(grid.n_cells);
  for (const auto& y : outputs) acc.add(y, clamp);
  return acc.finish(grid, t);
}

}  // namespace uqbench::sparsegrid
