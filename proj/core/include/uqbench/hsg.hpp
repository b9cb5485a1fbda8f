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
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "uqbench/apc.hpp"
#include "uqbench/moments.hpp"
#include "uqbench/solver.hpp"
#include "uqbench/stochastic.hpp"
#include "uqbench/work_pool.hpp"

namespace uqbench::hsg {

using UnitPoint = std::array<double, 3>;

/// Gauss-Legendre rule on [0, 1] with q nodes (weights sum to one).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(std::size_t q);

/// sqrt(2p + 1) P_p(2y - 1), orthonormal on [0, 1].
double legendre_unit(std::size_t p, double y);

/// 2^{3 N_r} (N_o + 3)! / (N_o! 3!).
std::size_t basis_count(std::size_t nr, std::size_t no);

/// Piecewise Legendre tensor polynomials of total degree <= N_o on the 2^{3 N_r}
/// uniform elements of the unit cube.
class HsgBasis {
 public:
  HsgBasis(std::size_t nr, std::size_t no);

  std::size_t nr() const { return nr_; }
  std::size_t no() const { return no_; }
  std::size_t per_axis() const { return std::size_t{1} << nr_; }
  std::size_t n_elements() const { return per_axis() * per_axis() * per_axis(); }
  std::size_t n_modes() const { return modes_.size(); }
  std::size_t size() const { return n_elements() * n_modes(); }
  const std::vector<apc::MultiIndex>& modes() const { return modes_; }

  /// Element multi-index, first dimension slowest.
  std::array<std::size_t, 3> element(std::size_t flat) const;
  /// Element containing x; points on the upper faces belong to the last element.
  std::size_t element_of(const UnitPoint& x) const;
  /// Lower corner of an element.
  UnitPoint corner(std::size_t flat) const;

  /// out[p] = Phi_{p,l}(x) for the modes of element l (x assumed inside it).
  void evaluate_local(std::size_t flat, const UnitPoint& x, std::span<double> out) const;
  /// Phi_{p,l}(x), zero outside the element.
  double evaluate(std::size_t mode, std::size_t flat, const UnitPoint& x) const;

 private:
  std::size_t nr_;
  std::size_t no_;
  std::vector<apc::MultiIndex> modes_;
};

/// Tensor quadrature nodes of one element with weights of total mass 2^{-3 N_r}.
struct ElementQuadrature {
  std::vector<UnitPoint> nodes;
  std::vector<double> weights;
  Eigen::MatrixXd values;  // nodes x modes, Phi_p at each node
};

ElementQuadrature element_quadrature(const HsgBasis& basis, std::size_t flat, std::size_t q);

/// Coefficients <g, Phi_{p,l}> of a vector-valued function by per-element
/// quadrature. Result[l] is (outputs x modes).
std::vector<Eigen::MatrixXd> project(const HsgBasis& basis, std::size_t q,
                                     const std::function<std::vector<double>(const UnitPoint&)>& g);

/// Pseudo-spectral Galerkin operator of one element: saturation at the
/// quadrature nodes, deterministic transport operator per node, projection
/// of the node tendencies back onto the modes.
class ElementOperator {
 public:
  ElementOperator(const HsgBasis& basis, std::size_t flat, std::size_t q,
                  const stochastic::Box& box, const physics::ScenarioConfig& cfg,
                  const solver::SolverConfig& scfg, double node_tolerance = 0.5);

  /// c and dcdt are (cells x modes). Node saturations are clamped to [0, 1]
  /// for the transport operator; NumericError when one leaves
  /// [-node_tolerance, 1 + node_tolerance].
  void rhs(const Eigen::MatrixXd& c, Eigen::MatrixXd& dcdt) const;
  /// Smallest CFL step over the quadrature nodes.
  double stable_dt() const;

  const ElementQuadrature& quadrature() const { return quad_; }
  const std::vector<physics::UncertainInput>& inputs() const { return inputs_; }

 private:
  solver::TransportOperator op_;
  ElementQuadrature quad_;
  std::vector<physics::UncertainInput> inputs_;
  std::vector<solver::TransportCoefficients> coeffs_;
  double tolerance_;
};

struct HsgOptions {
  std::size_t nr = 1;
  std::size_t no = 1;
  /// Gauss points per dimension; 0 selects N_o + 2.
  std::size_t quadrature = 0;
  /// Two runs on the halves of the porosity range instead of one.
  bool porosity_split = false;
  /// Allowed overshoot of node saturations outside [0, 1] before the run is
  /// declared under-resolved.
  double node_tolerance = 0.5;

  std::size_t quadrature_order() const { return quadrature == 0 ? no + 2 : quadrature; }
};

/// Deterministic coefficients on one basis cube at the end time.
struct HsgState {
  std::size_t nr = 0;
  std::size_t no = 0;
  stochastic::Box box;
  std::size_t n_cells = 0;
  double time = 0.0;
  std::vector<Eigen::MatrixXd> coefficients;  // per element: cells x modes
  std::vector<std::size_t> element_steps;

  /// Expansion evaluated at omega; DomainError outside the basis cube.
  std::vector<double> evaluate(const physics::UncertainInput& omega) const;
};

/// Marches every element independently to the end time with its own step.
HsgState hsg_simulate(const HsgOptions& options, const stochastic::Box& box,
                      const physics::ScenarioConfig& cfg, const solver::SolverConfig& scfg,
                      const WorkPool& pool = WorkPool());

/// One or two (porosity split) states with the cost counted in elements.
struct HsgSurrogate {
  HsgOptions options;
  std::vector<HsgState> parts;

  std::vector<double> evaluate(const physics::UncertainInput& omega) const;
  std::size_t cost() const;
};

/// Componentwise Θ bounds with a 1% margin.
stochastic::Box basis_box(const stochastic::SampleSet& set);

HsgSurrogate build_hsg(const stochastic::SampleSet& set, const HsgOptions& options,
                       const physics::ScenarioConfig& cfg, const solver::SolverConfig& scfg,
                       const WorkPool& pool = WorkPool());

/// Evaluates the expansion at every sample, clamps to [0, 1] and returns the
/// empirical moments. A sample outside the basis cube is an error naming it.
MomentField reconstruct_moments(const HsgSurrogate& surrogate, const stochastic::SampleSet& set,
                                const solver::Grid& grid);

}  // namespace uqbench::hsg
