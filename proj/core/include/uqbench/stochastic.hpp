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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uqbench/physics.hpp"

namespace uqbench::stochastic {

using physics::UncertainInput;

inline constexpr std::size_t kDims = 3;

/// Marginal distribution of one input dimension.
struct Marginal {
  enum class Family { kUniform, kTruncatedNormal };
  Family family = Family::kUniform;
  double a = 0.0;  // uniform lower bound, or normal mean
  double b = 1.0;  // uniform upper bound, or normal standard deviation
  double lower = 0.0;  // truncation bounds (normal only)
  double upper = 1.0;

  static Marginal uniform(double lo, double hi);
  static Marginal truncated_normal(double mean, double sd, double lo, double hi);
  static Family parse_family(const std::string& name);

  double cdf(double x) const;
  double quantile(double p) const;
  double support_lower() const;
  double support_upper() const;
};

/// Independent marginals for (omega1, omega2, omega3).
struct DistributionSpec {
  std::array<Marginal, kDims> marginals;

  /// Stand-in used when no published sample file is available.
  static DistributionSpec synthetic_default();
  void validate() const;
};

struct SampleSet {
  enum class Origin { kLoaded, kGenerated };

  std::vector<UncertainInput> samples;
  Origin origin = Origin::kLoaded;
  std::uint64_t seed = 0;
  std::string source;  // file path, or a description of the generating spec

  std::size_t size() const { return samples.size(); }
  /// Coordinate `dim` (0-based) of every sample.
  std::vector<double> column(std::size_t dim) const;
  /// First n samples (n clamped to size()).
  SampleSet head(std::size_t n) const;
};

double coordinate(const UncertainInput& omega, std::size_t dim);
void set_coordinate(UncertainInput& omega, std::size_t dim, double value);

/// Parses a CSV with three numeric columns (omega1, omega2, omega3); an optional
/// non-numeric header line is skipped. Comma, semicolon or whitespace separated.
SampleSet load_samples(const std::filesystem::path& path);
void save_samples(const SampleSet& set, const std::filesystem::path& path);

/// Reproducible draws by inverse-CDF sampling from a 64-bit Mersenne twister.
SampleSet generate_samples(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

/// E[omega_dim^k] for k = 0..k_max with compensated summation. dim is 1-based.
std::vector<double> raw_moments(const SampleSet& set, std::size_t dim, std::size_t k_max);
std::vector<double> raw_moments(const std::vector<double>& values, std::size_t k_max);

/// Componentwise bounding box of a sample set.
struct Box {
  std::array<double, kDims> lower{};
  std::array<double, kDims> upper{};

  /// Box grown by `fraction` of its width on every side.
  Box expanded(double fraction) const;
  std::array<double, kDims> to_unit(const UncertainInput& omega) const;
  UncertainInput from_unit(const std::array<double, kDims>& x) const;
  bool contains(const UncertainInput& omega) const;
};

Box bounding_box(const SampleSet& set);

}  // namespace uqbench::stochastic
