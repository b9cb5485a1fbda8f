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
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uqbench/moments.hpp"
#include "uqbench/run_cache.hpp"
#include "uqbench/stochastic.hpp"

namespace uqbench::apc {

inline constexpr std::size_t kMaxPcmOrder = 5;
inline constexpr std::size_t kMaxFtOrder = 10;

/// Polynomials P_0..P_order orthonormal under an empirical measure. Row k of
/// `coefficients` holds the monomial coefficients of P_k in the standardized
/// variable z = (x - shift) / scale.
struct OrthonormalBasis1D {
  std::size_t order = 0;
  std::vector<std::vector<double>> coefficients;
  double shift = 0.0;
  double scale = 1.0;

  double evaluate(std::size_t degree, double x) const;
  /// out[k] = P_k(x) for k = 0..order.
  void evaluate_all(double x, std::span<double> out) const;
  /// Real roots of P_order in the original variable, ascending.
  std::vector<double> roots() const;
};

/// Basis from raw moments E[x^k], k = 0..2*order, by solving the moment
/// matrix equation for each degree in extended precision. Throws NumericError
/// when the Hankel matrix is not positive definite.
OrthonormalBasis1D build_basis(std::span<const double> moments, std::size_t order);

/// Standardizes the data (mean, standard deviation) before taking moments.
OrthonormalBasis1D build_basis_from_samples(std::span<const double> values, std::size_t order);

using MultiIndex = std::array<int, 3>;

/// All degree triples with total degree <= order; the zero tuple first, then
/// graded lexicographic order.
std::vector<MultiIndex> total_degree_set(std::size_t order);

/// (order + dims)! / (order! dims!), including the constant.
std::size_t basis_size(std::size_t order, std::size_t dims = 3);

using Bases = std::array<OrthonormalBasis1D, 3>;

/// One basis of order `order` per input dimension from the sample set.
Bases build_bases(const stochastic::SampleSet& set, std::size_t order);

/// Row i = Phi_j(nodes[i]) for every multi-index j.
Eigen::MatrixXd design_matrix(const Bases& bases, const std::vector<MultiIndex>& indices,
                              std::span<const UncertainInput> nodes);

struct PceSurrogate {
  Bases bases;
  std::vector<MultiIndex> indices;
  Eigen::MatrixXd coefficients;  // |indices| x n_outputs
  std::size_t order = 0;
  std::string variant;           // "pcm" or "ft"
  std::vector<UncertainInput> nodes;
  double condition_number = 0.0;
  double residual_norm = 0.0;
  std::vector<std::string> warnings;

  std::vector<double> evaluate(const UncertainInput& omega) const;
  /// Column i = prediction at inputs[i].
  Eigen::MatrixXd evaluate_many(std::span<const UncertainInput> inputs) const;
  /// mean = c_0, std = sqrt(sum_{i>0} c_i^2).
  MomentField analytic_moments(const solver::Grid& grid, double t) const;
};

/// Tensor combinations of the roots of the degree-(order+1) polynomials,
/// ranked by the product of kernel-density estimates of the marginals. The
/// first basis_size(order) in rank order whose design rows are linearly
/// independent are returned.
std::vector<UncertainInput> pcm_points(const Bases& bases, std::size_t order,
                                       const stochastic::SampleSet& set);

/// Full tensor grid of the roots of the degree-(order+1) polynomials.
std::vector<UncertainInput> tensor_points(const Bases& bases, std::size_t order);

/// Square collocation solve. `outputs[i]` is the model response at nodes[i].
PceSurrogate fit_pcm(const Bases& bases, std::size_t order, std::span<const UncertainInput> nodes,
                     const std::vector<std::vector<double>>& outputs);

/// Least-squares fit of the total-degree expansion on a tensor grid.
PceSurrogate fit_least_squares_ft(const Bases& bases, std::size_t order,
                                  std::span<const UncertainInput> nodes,
                                  const std::vector<std::vector<double>>& outputs);

/// Evaluates the surrogate on every sample; values clamped to [0,1] when `clamp`.
MomentField pce_moments(const PceSurrogate& surrogate, const stochastic::SampleSet& set,
                        const solver::Grid& grid, double t, bool clamp = true);

/// End-to-end builds: bases from the samples, nodes, model runs, fit.
PceSurrogate build_pcm(const stochastic::SampleSet& set, std::size_t order, ModelRunner& runner,
                       RunTracker* tracker = nullptr);
PceSurrogate build_ft(const stochastic::SampleSet& set, std::size_t order, ModelRunner& runner,
                      RunTracker* tracker = nullptr);

}  // namespace uqbench::apc
