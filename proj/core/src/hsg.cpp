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

#include "uqbench/hsg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "uqbench/errors.hpp"

namespace uqbench::hsg {

QuadratureRule gauss_legendre(std::size_t q) {
  if (q == 0) throw ConfigError("quadrature needs at least one node");
  const auto positive = boost::math::legendre_p_zeros<double>(static_cast<int>(q));
  std::vector<double> zeros;
  for (double z : positive) {
    if (z > 0.0) zeros.push_back(-z);
  }
  for (double z : positive) zeros.push_back(z);
  std::sort(zeros.begin(), zeros.end());
  QuadratureRule rule;
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(q), z);
    rule.nodes.push_back(0.5 * (z + 1.0));
    rule.weights.push_back(1.0 / ((1.0 - z * z) * dp * dp));
  }
  return rule;
}

double legendre_unit(std::size_t p, double y) {
  return std::sqrt(2.0 * static_cast<double>(p) + 1.0) *
         boost::math::legendre_p(static_cast<int>(p), 2.0 * y - 1.0);
}

std::size_t basis_count(std::size_t nr, std::size_t no) {
  return (std::size_t{1} << (3 * nr)) * apc::basis_size(no, 3);
}

HsgBasis::HsgBasis(std::size_t nr, std::size_t no)
    : nr_(nr), no_(no), modes_(apc::total_degree_set(no)) {
  if (nr > 6) throw ConfigError("refinement level above 6 is not supported");
}

std::array<std::size_t, 3> HsgBasis::element(std::size_t flat) const {
  const std::size_t m = per_axis();
  return {flat / (m * m), (flat / m) % m, flat % m};
}

std::size_t HsgBasis::element_of(const UnitPoint& x) const {
  const std::size_t m = per_axis();
  std::size_t flat = 0;
  for (std::size_t d = 0; d < 3; ++d) {
    const auto cell = static_cast<std::size_t>(
        std::clamp(std::floor(x[d] * static_cast<double>(m)), 0.0, static_cast<double>(m - 1)));
    flat = flat * m + cell;
  }
  return flat;
}

UnitPoint HsgBasis::corner(std::size_t flat) const {
  const auto l = element(flat);
  const double h = 1.0 / static_cast<double>(per_axis());
  return {static_cast<double>(l[0]) * h, static_cast<double>(l[1]) * h,
          static_cast<double>(l[2]) * h};
}

void HsgBasis::evaluate_local(std::size_t flat, const UnitPoint& x, std::span<double> out) const {
  const auto l = element(flat);
  const double m = static_cast<double>(per_axis());
  const double scale = std::pow(m, 1.5);
  std::array<std::vector<double>, 3> uni;
  for (std::size_t d = 0; d < 3; ++d) {
    const double y = m * x[d] - static_cast<double>(l[d]);
    uni[d].resize(no_ + 1);
    for (std::size_t p = 0; p <= no_; ++p) uni[d][p] = legendre_unit(p, y);
  }
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const auto& p = modes_[k];
    out[k] = scale * uni[0][static_cast<std::size_t>(p[0])] * uni[1][static_cast<std::size_t>(p[1])] *
             uni[2][static_cast<std::size_t>(p[2])];
  }
}

double HsgBasis::evaluate(std::size_t mode, std::size_t flat, const UnitPoint& x) const {
  const auto l = element(flat);
  const double m = static_cast<double>(per_axis());
  for (std::size_t d = 0; d < 3; ++d) {
    const double y = m * x[d] - static_cast<double>(l[d]);
    if (y < 0.0 || y > 1.0) return 0.0;
  }
  std::vector<double> out(modes_.size());
  evaluate_local(flat, x, out);
  return out[mode];
}

ElementQuadrature element_quadrature(const HsgBasis& basis, std::size_t flat, std::size_t q) {
  const QuadratureRule rule = gauss_legendre(q);
  const UnitPoint lo = basis.corner(flat);
  const double h = 1.0 / static_cast<double>(basis.per_axis());
  const double volume = h * h * h;
  ElementQuadrature quad;
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      for (std::size_t c = 0; c < q; ++c) {
        quad.nodes.push_back({lo[0] + h * rule.nodes[a], lo[1] + h * rule.nodes[b],
                              lo[2] + h * rule.nodes[c]});
        quad.weights.push_back(volume * rule.weights[a] * rule.weights[b] * rule.weights[c]);
      }
    }
  }
  quad.values.resize(static_cast<Eigen::Index>(quad.nodes.size()),
                     static_cast<Eigen::Index>(basis.n_modes()));
  std::vector<double> row(basis.n_modes());
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    basis.evaluate_local(flat, quad.nodes[i], row);
    for (std::size_t k = 0; k < row.size(); ++k) {
      quad.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
  }
  return quad;
}

std::vector<Eigen::MatrixXd> project(
    const HsgBasis& basis, std::size_t q,
    const std::function<std::vector<double>(const UnitPoint&)>& g) {
  std::vector<Eigen::MatrixXd> out(basis.n_elements());
  for (std::size_t l = 0; l < basis.n_elements(); ++l) {
    const ElementQuadrature quad = element_quadrature(basis, l, q);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
      const std::vector<double> v = g(quad.nodes[i]);
      if (i == 0) out[l] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(v.size()),
                                                  static_cast<Eigen::Index>(basis.n_modes()));
      const Eigen::Map<const Eigen::VectorXd> col(v.data(), static_cast<Eigen::Index>(v.size()));
      out[l].noalias() += quad.weights[i] * col * quad.values.row(static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

ElementOperator::ElementOperator(const HsgBasis& basis, std::size_t flat, std::size_t q,
                                 const stochastic::Box& box, const physics::ScenarioConfig& cfg,
                                 const solver::SolverConfig& scfg, double node_tolerance)
    : op_(cfg, scfg), quad_(element_quadrature(basis, flat, q)), tolerance_(node_tolerance) {
  if (!(node_tolerance >= 0.0)) throw ConfigError("node tolerance must be >= 0");
  for (const auto& x : quad_.nodes) {
    inputs_.push_back(box.from_unit(x));
    coeffs_.push_back(solver::make_coefficients(inputs_.back(), cfg, scfg));
  }
}

void ElementOperator::rhs(const Eigen::MatrixXd& c, Eigen::MatrixXd& dcdt) const {
  const Eigen::MatrixXd nodal = c * quad_.values.transpose();  // cells x nodes
  const auto n_cells = static_cast<std::size_t>(nodal.rows());
  Eigen::MatrixXd tendency(nodal.rows(), nodal.cols());
  std::vector<double> s(n_cells);
  for (Eigen::Index q = 0; q < nodal.cols(); ++q) {
    for (std::size_t j = 0; j < n_cells; ++j) {
      const double v = nodal(static_cast<Eigen::Index>(j), q);
      if (!(v >= -tolerance_ && v <= 1.0 + tolerance_)) {
        std::ostringstream msg;
        msg << "stochastic Galerkin saturation " << v << " at quadrature node "
            << static_cast<std::size_t>(q) << " (cell " << j << ") leaves [" << -tolerance_
            << ", " << 1.0 + tolerance_ << "]; the basis is under-resolved";
        throw NumericError(msg.str());
      }
      s[j] = std::clamp(v, 0.0, 1.0);
    }
    op_.rhs(s, coeffs_[static_cast<std::size_t>(q)],
            std::span<double>(tendency.col(q).data(), n_cells));
  }
  Eigen::MatrixXd weighted = quad_.values;
  for (Eigen::Index q = 0; q < weighted.rows(); ++q) {
    weighted.row(q) *= quad_.weights[static_cast<std::size_t>(q)];
  }
  dcdt.noalias() = tendency * weighted;
}

double ElementOperator::stable_dt() const {
  double dt = std::numeric_limits<double>::infinity();
  for (const auto& c : coeffs_) dt = std::min(dt, op_.stable_dt(c));
  return dt;
}

std::vector<double> HsgState::evaluate(const physics::UncertainInput& omega) const {
  const auto x = box.to_unit(omega);
  for (double v : x) {
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "sample (" << omega.omega1 << ", " << omega.omega2 << ", " << omega.omega3
          << ") lies outside the stochastic Galerkin basis cube";
      throw DomainError(msg.str());
    }
  }
  const HsgBasis basis(nr, no);
  const std::size_t l = basis.element_of(x);
  std::vector<double> phi(basis.n_modes());
  basis.evaluate_local(l, x, phi);
  const Eigen::Map<const Eigen::VectorXd> p(phi.data(), static_cast<Eigen::Index>(phi.size()));
  const Eigen::VectorXd y = coefficients[l] * p;
  return {y.data(), y.data() + y.size()};
}

HsgState hsg_simulate(const HsgOptions& options, const stochastic::Box& box,
                      const physics::ScenarioConfig& cfg, const solver::SolverConfig& scfg,
                      const WorkPool& pool) {
  const HsgBasis basis(options.nr, options.no);
  const std::size_t q = options.quadrature_order();
  HsgState state;
  state.nr = options.nr;
  state.no = options.no;
  state.box = box;
  state.n_cells = cfg.n_cells;
  state.time = scfg.end_time(cfg);
  state.coefficients.resize(basis.n_elements());
  state.element_steps.resize(basis.n_elements());
  const auto cells = static_cast<Eigen::Index>(cfg.n_cells);
  const auto modes = static_cast<Eigen::Index>(basis.n_modes());
  pool.parallel_for(basis.n_elements(), [&](std::size_t l) {
    const ElementOperator op(basis, l, q, box, cfg, scfg, options.node_tolerance);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(cells, modes);
    const double limit = op.stable_dt();
    std::size_t steps = 0;
    if (std::isfinite(limit)) {
      steps = solver::step_count(state.time, limit);
      const double dt = state.time / static_cast<double>(steps);
      Eigen::MatrixXd k1(cells, modes), k2(cells, modes), stage(cells, modes);
      for (std::size_t i = 0; i < steps; ++i) {
        op.rhs(c, k1);
        stage = c + dt * k1;
        op.rhs(stage, k2);
        c = 0.5 * (c + stage + dt * k2);
      }
    }
    state.coefficients[l] = std::move(c);
    state.element_steps[l] = steps;
  });
  return state;
}

std::vector<double> HsgSurrogate::evaluate(const physics::UncertainInput& omega) const {
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    if (parts[k].box.contains(omega)) return parts[k].evaluate(omega);
  }
  return parts.back().evaluate(omega);
}

std::size_t HsgSurrogate::cost() const {
  std::size_t total = 0;
  for (const auto& p : parts) total += std::size_t{1} << (3 * p.nr);
  return total;
}

stochastic::Box basis_box(const stochastic::SampleSet& set) {
  return stochastic::bounding_box(set).expanded(0.01);
}

HsgSurrogate build_hsg(const stochastic::SampleSet& set, const HsgOptions& options,
                       const physics::ScenarioConfig& cfg, const solver::SolverConfig& scfg,
                       const WorkPool& pool) {
  HsgSurrogate out;
  out.options = options;
  const stochastic::Box box = basis_box(set);
  if (!options.porosity_split) {
    out.parts.push_back(hsg_simulate(options, box, cfg, scfg, pool));
    return out;
  }
  const double mid = 0.5 * (box.lower[2] + box.upper[2]);
  stochastic::Box low = box;
  stochastic::Box high = box;
  low.upper[2] = mid;
  high.lower[2] = mid;
  out.parts.push_back(hsg_simulate(options, low, cfg, scfg, pool));
  out.parts.push_back(hsg_simulate(options, high, cfg, scfg, pool));
  return out;
}

MomentField reconstruct_moments(const HsgSurrogate& surrogate, const stochastic::SampleSet& set,
                                const solver::Grid& grid) {
  std::vector<std::vector<double>> outputs(set.size());
  WorkPool().parallel_for(set.size(), [&](std::size_t i) {
    outputs[i] = surrogate.evaluate(set.samples[i]);
  });
  MomentAccumulator acc(grid.n_cells);
  for (const auto& y : outputs) acc.add(y, true);
  return acc.finish(grid, surrogate.parts.front().time);
}

}  // namespace uqbench::hsg
