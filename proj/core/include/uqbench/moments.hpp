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
#include <filesystem>
#include <span>
#include <vector>

#include "uqbench/solver.hpp"

namespace uqbench {

/// Per-cell mean and standard deviation of the saturation.
struct MomentField {
  std::vector<double> r_centers;
  double dr = 0.0;
  std::vector<double> mean;
  std::vector<double> std;
  std::size_t n_samples = 0;
  double t = 0.0;

  std::size_t size() const { return mean.size(); }
};

/// Streaming per-cell mean/variance (Welford). Unbiased (n-1) standard
/// deviation; a single sample reports zero.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t n_cells);

  /// Values are clamped to [0,1] first when `clamp` is set.
  void add(std::span<const double> values, bool clamp = false);
  void merge(const MomentAccumulator& other);
  std::size_t count() const { return count_; }

  MomentField finish(const solver::Grid& grid, double t) const;

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// Moments over a list of runs, accumulated in list order.
MomentField moments_of(const std::vector<std::vector<double>>& runs, const solver::Grid& grid,
                       double t, bool clamp = false);

/// CSV with columns r_center, mean, std.
void write_moments_csv(const MomentField& field, const std::filesystem::path& path);
MomentField read_moments_csv(const std::filesystem::path& path);

}  // namespace uqbench
