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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/hsg.hpp"
#include "uqbench/solver.hpp"

using namespace uqbench;
using namespace uqbench::hsg;

namespace {

physics::ScenarioConfig scenario(std::size_t cells) {
  physics::ScenarioConfig cfg;
  cfg.n_cells = cells;
  return cfg;
}

stochastic::Box test_box() {
  stochastic::Box b;
  b.lower = {-0.2, 1.5, 0.1};
  b.upper = {0.3, 3.0, 0.25};
  return b;
}

physics::UncertainInput midpoint(const stochastic::Box& b) {
  return b.from_unit({0.5, 0.5, 0.5});
}

}  // namespace

TEST(HsgQuadrature, MatchesGolubWelsch) {
  for (std::size_t q = 1; q <= 10; ++q) {
    const auto rule = gauss_legendre(q);
    const auto [nodes, weights] = oracle::golub_welsch(q);
    ASSERT_EQ(rule.nodes.size(), q);
    double total = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      EXPECT_NEAR(rule.nodes[i], nodes[i], 1e-13);
      EXPECT_NEAR(rule.weights[i], weights[i], 1e-13);
      total += rule.weights[i];
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
  }
  EXPECT_THROW(gauss_legendre(0), ConfigError);
}

TEST(HsgQuadrature, ExactForDegree2qMinus1) {
  for (std::size_t q = 1; q <= 8; ++q) {
    const auto rule = gauss_legendre(q);
    for (std::size_t k = 0; k <= 2 * q - 1; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < q; ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], k);
      EXPECT_NEAR(acc, 1.0 / static_cast<double>(k + 1), 1e-14);
    }
  }
}

TEST(HsgBasisTest, LegendreMatchesRecurrence) {
  for (std::size_t p = 0; p <= 6; ++p) {
    for (double y : {0.0, 0.13, 0.5, 0.77, 1.0}) {
      EXPECT_NEAR(legendre_unit(p, y), oracle::legendre_unit(p, y), 1e-13);
    }
  }
}

TEST(HsgBasisTest, CountFormulaMatchesEnumeration) {
  for (std::size_t nr = 0; nr <= 3; ++nr) {
    for (std::size_t no = 0; no <= 3; ++no) {
      std::size_t modes = 0;
      for (std::size_t a = 0; a <= no; ++a) {
        for (std::size_t b = 0; a + b <= no; ++b) {
          for (std::size_t c = 0; a + b + c <= no; ++c) ++modes;
        }
      }
      const HsgBasis basis(nr, no);
      EXPECT_EQ(basis.size(), (std::size_t{1} << (3 * nr)) * modes);
      EXPECT_EQ(basis_count(nr, no), basis.size());
    }
  }
  EXPECT_EQ(basis_count(2, 1), 256u);
  EXPECT_THROW(HsgBasis(7, 1), ConfigError);
}

TEST(HsgBasisTest, GramIsIdentity) {
  for (std::size_t nr = 0; nr <= 3; ++nr) {
    for (std::size_t no = 0; no <= 3; ++no) {
      const HsgBasis basis(nr, no);
      for (std::size_t l = 0; l < basis.n_elements(); l += std::max<std::size_t>(1, basis.n_elements() / 7)) {
        const auto quad = element_quadrature(basis, l, no + 2);
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.n_modes()),
                                                     static_cast<Eigen::Index>(basis.n_modes()));
        for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
          const auto row = quad.values.row(static_cast<Eigen::Index>(i));
          gram.noalias() += quad.weights[i] * row.transpose() * row;
        }
        const double err =
            (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
        EXPECT_LT(err, 1e-10) << "nr " << nr << " no " << no << " element " << l;
      }
    }
  }
}

TEST(HsgBasisTest, CompactSupportAndElements) {
  const HsgBasis basis(1, 1);
  EXPECT_EQ(basis.element_of({0.25, 0.75, 0.25}), 2u);
  EXPECT_EQ(basis.element_of({1.0, 1.0, 1.0}), 7u);
  EXPECT_EQ(basis.element(6), (std::array<std::size_t, 3>{1, 1, 0}));
  EXPECT_EQ(basis.evaluate(0, 0, {0.75, 0.25, 0.25}), 0.0);
  EXPECT_NEAR(basis.evaluate(0, 0, {0.25, 0.25, 0.25}), std::pow(2.0, 1.5), 1e-14);
}

TEST(HsgProjection, ConstantField) {
  for (std::size_t nr = 0; nr <= 2; ++nr) {
    const HsgBasis basis(nr, 2);
    const auto c = project(basis, 4, [](const UnitPoint&) { return std::vector<double>{0.6}; });
    for (const auto& m : c) {
      EXPECT_NEAR(m(0, 0), 0.6 * std::pow(2.0, -1.5 * static_cast<double>(nr)), 1e-14);
      for (Eigen::Index k = 1; k < m.cols(); ++k) EXPECT_NEAR(m(0, k), 0.0, 1e-14);
    }
  }
}

TEST(HsgProjection, BasisFunctionIsKronecker) {
  const HsgBasis basis(1, 2);
  const std::size_t mode = 5;
  const std::size_t elem = 3;
  const auto c = project(basis, 4, [&](const UnitPoint& x) {
    return std::vector<double>{basis.element_of(x) == elem ? basis.evaluate(mode, elem, x) : 0.0};
  });
  for (std::size_t l = 0; l < basis.n_elements(); ++l) {
    for (std::size_t k = 0; k < basis.n_modes(); ++k) {
      EXPECT_NEAR(c[l](0, static_cast<Eigen::Index>(k)), l == elem && k == mode ? 1.0 : 0.0, 1e-13);
    }
  }
}

TEST(HsgProjection, LinearFieldClosedForm) {
  // g = x3 on N_r = 1, N_o = 1: modes (0,0,0), (1,0,0), (0,1,0), (0,0,1).
  const HsgBasis basis(1, 1);
  const auto c = project(basis, 3, [](const UnitPoint& x) { return std::vector<double>{x[2]}; });
  const double s = std::pow(2.0, 1.5);
  for (std::size_t l = 0; l < 8; ++l) {
    const double a = basis.corner(l)[2];
    EXPECT_NEAR(c[l](0, 0), 0.25 * s * 0.5 * (a + 0.25), 1e-14);
    EXPECT_NEAR(c[l](0, 1), 0.0, 1e-14);
    EXPECT_NEAR(c[l](0, 2), 0.0, 1e-14);
    EXPECT_NEAR(c[l](0, 3), s * std::sqrt(3.0) / 96.0, 1e-14);
  }
}

TEST(HsgOperator, ZeroStateZeroInflowGivesZeroTendency) {
  stochastic::Box b = test_box();
  b.lower[0] = b.upper[0] = -1.0;
  const auto cfg = scenario(30);
  const HsgBasis basis(1, 1);
  for (std::size_t l = 0; l < basis.n_elements(); ++l) {
    const ElementOperator op(basis, l, 3, b, cfg, SolverConfig{});
    Eigen::MatrixXd d;
    op.rhs(Eigen::MatrixXd::Zero(30, 4), d);
    EXPECT_EQ(d.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(HsgOperator, SingleNodeCollapseEqualsDeterministicTendency) {
  const auto cfg = scenario(40);
  const SolverConfig scfg;
  const auto b = test_box();
  const HsgBasis basis(0, 0);
  const ElementOperator op(basis, 0, 1, b, cfg, scfg);
  std::vector<double> s(40);
  for (std::size_t j = 0; j < 40; ++j) s[j] = std::max(0.0, 0.8 - 0.03 * static_cast<double>(j));
  Eigen::MatrixXd c(40, 1);
  for (std::size_t j = 0; j < 40; ++j) c(static_cast<Eigen::Index>(j), 0) = s[j];
  Eigen::MatrixXd d;
  op.rhs(c, d);
  const solver::TransportOperator det(cfg, scfg);
  std::vector<double> expected(40);
  det.rhs(s, solver::make_coefficients(midpoint(b), cfg, scfg), expected);
  for (std::size_t j = 0; j < 40; ++j) EXPECT_EQ(d(static_cast<Eigen::Index>(j), 0), expected[j]);
}

TEST(HsgOperator, TendencyMatchesDenseQuadratureOracle) {
  // Independent assembly of <R(S(w), w), Phi_p> on one element with a
  // Golub-Welsch rule of order 8 and recurrence-based Legendre values.
  const auto cfg = scenario(25);
  const SolverConfig scfg;
  const auto b = test_box();
  const HsgBasis basis(1, 1);
  const std::size_t q = 8;
  const auto [gn, gw] = oracle::golub_welsch(q);
  const solver::TransportOperator det(cfg, scfg);
  const double scale = std::pow(2.0, 1.5);
  for (std::size_t l : {0u, 5u, 7u}) {
    Eigen::MatrixXd c(25, 4);
    for (Eigen::Index j = 0; j < 25; ++j) {
      const double base = 0.55 - 0.018 * static_cast<double>(j);
      c(j, 0) = base / scale;
      c(j, 1) = 0.02 / scale;
      c(j, 2) = -0.015 / scale;
      c(j, 3) = 0.01 * std::sin(static_cast<double>(j)) / scale;
    }
    const ElementOperator op(basis, l, q, b, cfg, scfg);
    Eigen::MatrixXd got;
    op.rhs(c, got);

    const auto corner = basis.corner(l);
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(25, 4);
    std::vector<double> s(25), ds(25);
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t k = 0; k < q; ++k) {
          const std::array<double, 3> y{gn[i], gn[j], gn[k]};
          const UnitPoint x{corner[0] + 0.5 * y[0], corner[1] + 0.5 * y[1], corner[2] + 0.5 * y[2]};
          const double w = gw[i] * gw[j] * gw[k] / 8.0;
          std::array<double, 4> phi{};
          phi[0] = scale;
          // Modes (1,0,0), (0,1,0), (0,0,1) vary along x1, x2, x3.
          phi[1] = scale * oracle::legendre_unit(1, y[0]);
          phi[2] = scale * oracle::legendre_unit(1, y[1]);
          phi[3] = scale * oracle::legendre_unit(1, y[2]);
          for (Eigen::Index r = 0; r < 25; ++r) {
            double v = 0.0;
            for (Eigen::Index m = 0; m < 4; ++m) v += c(r, m) * phi[static_cast<std::size_t>(m)];
            s[static_cast<std::size_t>(r)] = std::clamp(v, 0.0, 1.0);
          }
          det.rhs(s, solver::make_coefficients(b.from_unit(x), cfg, scfg), ds);
          for (Eigen::Index r = 0; r < 25; ++r) {
            for (Eigen::Index m = 0; m < 4; ++m) {
              want(r, m) += w * ds[static_cast<std::size_t>(r)] * phi[static_cast<std::size_t>(m)];
            }
          }
        }
      }
    }
    const double scale_ref = want.cwiseAbs().maxCoeff();
    ASSERT_GT(scale_ref, 0.0);
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-10 * scale_ref) << "element " << l;
  }
}

TEST(HsgOperator, OutOfRangeNodeSaturationIsAnError) {
  const auto cfg = scenario(10);
  const HsgBasis basis(0, 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(10, 4);
  c(4, 0) = 0.5;
  c(4, 1) = 0.6;  // 0.5 +- 0.6 sqrt(3) * 0.77 at the extreme nodes, about -0.3 and 1.3
  Eigen::MatrixXd d;
  const ElementOperator strict(basis, 0, 3, test_box(), cfg, SolverConfig{}, 0.05);
  EXPECT_THROW(strict.rhs(c, d), NumericError);
  const ElementOperator loose(basis, 0, 3, test_box(), cfg, SolverConfig{});
  EXPECT_NO_THROW(loose.rhs(c, d));
  c(4, 1) = 1.0;  // about -0.84
  EXPECT_THROW(loose.rhs(c, d), NumericError);
  EXPECT_THROW(ElementOperator(basis, 0, 3, test_box(), cfg, SolverConfig{}, -1.0), ConfigError);
}

TEST(HsgOperator, ElementsDecouple) {
  // Element 0 of an N_r = 1 basis on box A is the single element of an
  // N_r = 0 basis on A's lower octant; both march identically.
  const auto cfg = scenario(30);
  const SolverConfig scfg;
  const auto a = test_box();
  stochastic::Box octant = a;
  for (std::size_t d = 0; d < 3; ++d) octant.upper[d] = 0.5 * (a.lower[d] + a.upper[d]);
  HsgOptions fine;
  fine.nr = 1;
  fine.no = 1;
  HsgOptions coarse = fine;
  coarse.nr = 0;
  const auto sa = hsg_simulate(fine, a, cfg, scfg);
  const auto sb = hsg_simulate(coarse, octant, cfg, scfg);
  EXPECT_EQ(sa.element_steps[0], sb.element_steps[0]);
  for (const UnitPoint u : {UnitPoint{0.1, 0.2, 0.3}, UnitPoint{0.45, 0.05, 0.4}}) {
    const auto omega = a.from_unit(u);
    const auto ya = sa.evaluate(omega);
    const auto yb = sb.evaluate(omega);
    for (std::size_t j = 0; j < ya.size(); ++j) EXPECT_NEAR(ya[j], yb[j], 1e-12);
  }
  // Zeroing another element's coefficients leaves element 0 untouched.
  auto modified = sa;
  modified.coefficients[5].setZero();
  const auto omega = a.from_unit({0.1, 0.2, 0.3});
  EXPECT_EQ(modified.evaluate(omega), sa.evaluate(omega));
}

TEST(HsgSimulate, DegenerateBasisEqualsDeterministicTrajectory) {
  const auto cfg = scenario(50);
  const SolverConfig scfg;
  const auto b = test_box();
  const HsgBasis basis(0, 0);
  const ElementOperator op(basis, 0, 1, b, cfg, scfg);
  solver::TransportSolver det(midpoint(b), cfg, scfg);
  EXPECT_DOUBLE_EQ(op.stable_dt(), det.stable_dt());
  const double dt = 0.9 * det.stable_dt();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(50, 1);
  Eigen::MatrixXd k1, k2, stage;
  for (int step = 0; step < 40; ++step) {
    op.rhs(c, k1);
    stage = c + dt * k1;
    op.rhs(stage, k2);
    c = 0.5 * (c + stage + dt * k2);
    det.step(dt);
    for (std::size_t j = 0; j < 50; ++j) {
      ASSERT_NEAR(c(static_cast<Eigen::Index>(j), 0), det.state()[j], 1e-12) << "step " << step;
    }
  }

  HsgOptions opt;
  opt.nr = 0;
  opt.no = 0;
  opt.quadrature = 1;
  const auto state = hsg_simulate(opt, b, cfg, scfg);
  const auto field = solver::simulate(midpoint(b), cfg, scfg);
  const auto y = state.evaluate(midpoint(b));
  for (std::size_t j = 0; j < 50; ++j) EXPECT_NEAR(y[j], field.values[j], 1e-12);
  EXPECT_EQ(state.element_steps[0], solver::step_count(scfg.end_time(cfg), det.stable_dt()));
}

TEST(HsgReconstruct, ConstantModeState) {
  const auto set =
      stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(), 200, 1);
  HsgSurrogate s;
  HsgState st;
  st.nr = 1;
  st.no = 1;
  st.box = basis_box(set);
  st.n_cells = 3;
  st.time = 10.0;
  for (int l = 0; l < 8; ++l) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 4);
    c.col(0) << 0.1, 0.2, 0.3;
    c.col(0) /= std::pow(2.0, 1.5);
    st.coefficients.push_back(c);
  }
  s.parts.push_back(st);
  solver::Grid g;
  g.n_cells = 3;
  g.dr = 1.0;
  g.r_centers = {1, 2, 3};
  const auto m = reconstruct_moments(s, set, g);
  EXPECT_NEAR(m.mean[0], 0.1, 1e-14);
  EXPECT_NEAR(m.mean[2], 0.3, 1e-14);
  EXPECT_NEAR(m.std[1], 0.0, 1e-14);
  EXPECT_EQ(s.cost(), 8u);

  auto outside = set;
  outside.samples.push_back({5.0, 2.0, 0.2});
  try {
    reconstruct_moments(s, outside, g);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("(5, 2, 0.2)"), std::string::npos) << e.what();
  }
}

TEST(HsgReconstruct, ProjectedLinearFunctionMatchesDirectMoments) {
  const auto set =
      stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(), 500, 2);
  const auto box = basis_box(set);
  auto g = [](const physics::UncertainInput& w) {
    return std::vector<double>{0.3 + 0.1 * w.omega1, 0.2 + 0.05 * w.omega2 + w.omega3};
  };
  const HsgBasis basis(1, 1);
  const auto coeffs = project(basis, 3, [&](const UnitPoint& x) { return g(box.from_unit(x)); });
  HsgState st;
  st.nr = 1;
  st.no = 1;
  st.box = box;
  st.n_cells = 2;
  st.coefficients = coeffs;
  HsgSurrogate s;
  s.parts.push_back(st);
  solver::Grid grid;
  grid.n_cells = 2;
  grid.dr = 1.0;
  grid.r_centers = {1, 2};
  const auto m = reconstruct_moments(s, set, grid);
  std::vector<std::vector<double>> direct;
  for (const auto& w : set.samples) direct.push_back(g(w));
  const auto ref = moments_of(direct, grid, 0.0);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(m.mean[j], ref.mean[j], 1e-12);
    EXPECT_NEAR(m.std[j], ref.std[j], 1e-12);
  }
}

TEST(HsgSurrogateTest, PorositySplitCoversBothHalves) {
  const auto set =
      stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(), 100, 3);
  HsgOptions opt;
  opt.nr = 0;
  opt.no = 1;
  opt.porosity_split = true;
  const auto s = build_hsg(set, opt, scenario(20), SolverConfig{});
  ASSERT_EQ(s.parts.size(), 2u);
  EXPECT_EQ(s.cost(), 2u);
  EXPECT_DOUBLE_EQ(s.parts[0].box.upper[2], s.parts[1].box.lower[2]);
  for (const auto& w : set.samples) {
    const auto y = s.evaluate(w);
    EXPECT_EQ(y.size(), 20u);
  }
}
