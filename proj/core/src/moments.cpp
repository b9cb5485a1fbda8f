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

#include "uqbench/moments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "uqbench/csv.hpp"
#include "uqbench/errors.hpp"

namespace uqbench {

MomentAccumulator::MomentAccumulator(std::size_t n_cells) : mean_(n_cells, 0.0), m2_(n_cells, 0.0) {}

void MomentAccumulator::add(std::span<const double> values, bool clamp) {
  if (values.size() != mean_.size()) throw ConfigError("run length does not match the grid");
  ++count_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t j = 0; j < mean_.size(); ++j) {
    const double x = clamp ? std::clamp(values[j], 0.0, 1.0) : values[j];
    const double delta = x - mean_[j];
    mean_[j] += delta * inv;
    m2_[j] += delta * (x - mean_[j]);
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  for (std::size_t j = 0; j < mean_.size(); ++j) {
    const double delta = other.mean_[j] - mean_[j];
    mean_[j] += delta * n_b / n;
    m2_[j] += other.m2_[j] + delta * delta * n_a * n_b / n;
  }
  count_ += other.count_;
}

MomentField MomentAccumulator::finish(const solver::Grid& grid, double t) const {
  MomentField field;
  field.r_centers = grid.r_centers;
  field.dr = grid.dr;
  field.mean = mean_;
  field.std.assign(mean_.size(), 0.0);
  if (count_ > 1) {
    const double denom = static_cast<double>(count_ - 1);
    for (std::size_t j = 0; j < mean_.size(); ++j) {
      field.std[j] = std::sqrt(std::max(0.0, m2_[j] / denom));
    }
  }
  field.n_samples = count_;
  field.t = t;
  return field;
}

MomentField moments_of(const std::vector<std::vector<double>>& runs, const solver::Grid& grid,
                       double t, bool clamp) {
  MomentAccumulator acc(grid.n_cells);
  for (const auto& run : runs) acc.add(run, clamp);
  return acc.finish(grid, t);
}

void write_moments_csv(const MomentField& field, const std::filesystem::path& path) {
  CsvWriter out(path, {"r_center", "mean", "std"});
  for (std::size_t j = 0; j < field.size(); ++j) {
    out.row({field.r_centers[j], field.mean[j], field.std[j]});
  }
}

MomentField read_moments_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t r = table.column_index("r_center");
  const std::size_t m = table.column_index("mean");
  const std::size_t s = table.column_index("std");
  MomentField field;
  for (const auto& row : table.rows) {
    field.r_centers.push_back(row[r]);
    field.mean.push_back(row[m]);
    field.std.push_back(row[s]);
  }
  if (field.r_centers.size() >= 2) field.dr = field.r_centers[1] - field.r_centers[0];
  return field;
}

}  // namespace uqbench
