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

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "uqbench/apc.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/stochastic.hpp"

using namespace uqbench;

namespace {

stochastic::SampleSet theta(std::size_t n = 2000) {
  return stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(), n, 42);
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
  }
  return x;
}

// Cubic in all three inputs with cross terms; total degree 3.
double cubic(const physics::UncertainInput& w) {
  return 0.3 + 0.5 * w.omega1 - 0.2 * w.omega2 * w.omega3 + 1.7 * w.omega3 * w.omega3 +
         0.05 * w.omega1 * w.omega2 * w.omega3 - 0.01 * w.omega2 * w.omega2 * w.omega2;
}

std::vector<std::vector<double>> outputs_of(const std::vector<physics::UncertainInput>& nodes,
                                            double (*f)(const physics::UncertainInput&)) {
  std::vector<std::vector<double>> out;
  for (const auto& n : nodes) out.push_back({f(n), 2.0 * f(n) - 1.0});
  return out;
}

}  // namespace

TEST(Apc, GramIsIdentityOnTheta) {
  const auto set = theta();
  for (std::size_t order = 0; order <= 5; ++order) {
    for (std::size_t d = 0; d < 3; ++d) {
      const auto col = set.column(d);
      const auto basis = apc::build_basis_from_samples(col, order);
      std::vector<double> phi(order + 1);
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(order + 1, order + 1);
      for (double x : col) {
        basis.evaluate_all(x, phi);
        for (std::size_t a = 0; a <= order; ++a) {
          for (std::size_t b = 0; b <= order; ++b) gram(a, b) += phi[a] * phi[b];
        }
      }
      gram /= static_cast<double>(col.size());
      const double err = (gram - Eigen::MatrixXd::Identity(order + 1, order + 1)).cwiseAbs().maxCoeff();
      EXPECT_LE(err, 1e-6) << "order " << order << " dim " << d;
    }
  }
}

TEST(Apc, DegreeZeroIsConstantOne) {
  const auto basis = apc::build_basis_from_samples(theta().column(1), 3);
  for (double x : {1.0, 2.5, 4.0}) EXPECT_DOUBLE_EQ(basis.evaluate(0, x), 1.0);
}

TEST(Apc, UniformGridGivesNormalizedLegendre) {
  const auto x = uniform_grid(100000);
  const auto basis = apc::build_basis_from_samples(x, 5);
  const auto legendre = oracle::normalized_legendre(5);
  for (std::size_t k = 0; k <= 5; ++k) {
    const auto got = oracle::unstandardize(basis.coefficients[k], basis.shift, basis.scale);
    ASSERT_EQ(got.size(), legendre[k].size());
    for (std::size_t j = 0; j <= k; ++j) EXPECT_NEAR(got[j], legendre[k][j], 1e-3) << k << "," << j;
  }
}

TEST(Apc, ExactUniformMomentsGiveLegendre) {
  std::vector<double> m(11);
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = k % 2 == 0 ? 1.0 / static_cast<double>(k + 1) : 0.0;
  const auto basis = apc::build_basis(m, 5);
  const auto legendre = oracle::normalized_legendre(5);
  for (std::size_t k = 0; k <= 5; ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      EXPECT_NEAR(basis.coefficients[k][j], legendre[k][j], 1e-10);
    }
  }
}

TEST(Apc, NormalQuantilesGiveHermite) {
  // Stratified draws: one per quantile bin, so the sample moments are close
  // to the Gaussian ones without Monte Carlo noise.
  constexpr std::size_t n = 100000;
  const boost::math::normal_distribution<double> normal;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = boost::math::quantile(normal, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  const auto basis = apc::build_basis_from_samples(z, 3);
  const auto hermite = oracle::normalized_hermite(3);
  // Degree 3 depends on the sixth moment, which the truncated tails of the
  // stratified sample bias by about 1e-3; it gets a looser check.
  for (std::size_t k = 0; k <= 3; ++k) {
    const auto got = oracle::unstandardize(basis.coefficients[k], basis.shift, basis.scale);
    const double tol = k <= 2 ? 1e-3 : 5e-3;
    for (std::size_t j = 0; j <= k; ++j) EXPECT_NEAR(got[j], hermite[k][j], tol) << k << "," << j;
  }
  // (w^2 - 1) / sqrt(2)
  const auto p2 = oracle::unstandardize(basis.coefficients[2], basis.shift, basis.scale);
  EXPECT_NEAR(p2[0], -1.0 / std::sqrt(2.0), 1e-3);
  EXPECT_NEAR(p2[2], 1.0 / std::sqrt(2.0), 1e-3);
}

TEST(Apc, UniformFirstOrderRoots) {
  const auto x = uniform_grid(100000);
  const auto basis = apc::build_basis_from_samples(x, 2);
  const auto roots = basis.roots();
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], -1.0 / std::sqrt(3.0), 1e-4);
  EXPECT_NEAR(roots[1], 1.0 / std::sqrt(3.0), 1e-4);

  // Same roots after an affine map of the data.
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 + 0.5 * x[i];
  const auto mapped = apc::build_basis_from_samples(y, 2).roots();
  EXPECT_NEAR(mapped[0], 3.0 - 0.5 / std::sqrt(3.0), 1e-4);
  EXPECT_NEAR(mapped[1], 3.0 + 0.5 / std::sqrt(3.0), 1e-4);
}

TEST(Apc, RootsAreRealSortedAndInsideSupport) {
  const auto set = theta();
  for (std::size_t d = 0; d < 3; ++d) {
    const auto col = set.column(d);
    const double lo = *std::min_element(col.begin(), col.end());
    const double hi = *std::max_element(col.begin(), col.end());
    for (std::size_t order = 1; order <= 6; ++order) {
      const auto roots = apc::build_basis_from_samples(col, order).roots();
      ASSERT_EQ(roots.size(), order);
      for (std::size_t i = 0; i < roots.size(); ++i) {
        EXPECT_GT(roots[i], lo);
        EXPECT_LT(roots[i], hi);
        if (i > 0) EXPECT_LT(roots[i - 1], roots[i]);
      }
    }
  }
}

TEST(Apc, TotalDegreeSet) {
  EXPECT_EQ(apc::basis_size(0), 1u);
  EXPECT_EQ(apc::basis_size(1), 4u);
  EXPECT_EQ(apc::basis_size(2), 10u);
  EXPECT_EQ(apc::basis_size(3), 20u);
  EXPECT_EQ(apc::basis_size(5), 56u);
  for (std::size_t order = 0; order <= 6; ++order) {
    const auto set = apc::total_degree_set(order);
    EXPECT_EQ(set.size(), apc::basis_size(order));
    EXPECT_EQ(set.front(), (apc::MultiIndex{0, 0, 0}));
    for (const auto& m : set) EXPECT_LE(m[0] + m[1] + m[2], static_cast<int>(order));
  }
}

TEST(Apc, PcmNodeCounts) {
  const auto set = theta();
  const std::size_t expected[] = {1, 4, 10, 20};
  for (std::size_t order = 0; order <= 3; ++order) {
    const auto bases = apc::build_bases(set, order + 1);
    const auto nodes = apc::pcm_points(bases, order, set);
    EXPECT_EQ(nodes.size(), expected[order]);
    const auto a = apc::design_matrix(bases, apc::total_degree_set(order), nodes);
    EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(a).rank(), a.rows());
    // No duplicates.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) EXPECT_FALSE(nodes[i] == nodes[j]);
    }
  }
}

TEST(Apc, FullTensorNodeCounts) {
  const auto set = theta();
  EXPECT_EQ(apc::tensor_points(apc::build_bases(set, 5), 4).size(), 125u);
  EXPECT_EQ(apc::tensor_points(apc::build_bases(set, 11), 10).size(), 1331u);
}

TEST(Apc, PcmNodesAreDeterministic) {
  const auto set = theta();
  const auto bases = apc::build_bases(set, 3);
  EXPECT_EQ(apc::pcm_points(bases, 2, set), apc::pcm_points(bases, 2, set));
}

TEST(Apc, PcmReproducesPolynomials) {
  const auto set = theta();
  const auto bases = apc::build_bases(set, 4);
  const auto nodes = apc::pcm_points(bases, 3, set);
  const auto s = apc::fit_pcm(bases, 3, nodes, outputs_of(nodes, cubic));
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& w = set.samples[i];
    const auto y = s.evaluate(w);
    EXPECT_NEAR(y[0], cubic(w), 1e-8);
    EXPECT_NEAR(y[1], 2.0 * cubic(w) - 1.0, 1e-8);
  }
}

TEST(Apc, FullTensorReproducesPolynomials) {
  const auto set = theta();
  const auto bases = apc::build_bases(set, 4);
  const auto nodes = apc::tensor_points(bases, 3);
  const auto s = apc::fit_least_squares_ft(bases, 3, nodes, outputs_of(nodes, cubic));
  EXPECT_LT(s.residual_norm, 1e-8);
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& w = set.samples[i];
    EXPECT_NEAR(s.evaluate(w)[0], cubic(w), 1e-8);
  }
}

TEST(Apc, ConstantModel) {
  const auto set = theta();
  const auto bases = apc::build_bases(set, 3);
  const auto nodes = apc::pcm_points(bases, 2, set);
  const std::vector<std::vector<double>> outputs(nodes.size(), std::vector<double>{0.7});
  const auto s = apc::fit_pcm(bases, 2, nodes, outputs);
  EXPECT_NEAR(s.coefficients(0, 0), 0.7, 1e-12);
  for (Eigen::Index i = 1; i < s.coefficients.rows(); ++i) EXPECT_NEAR(s.coefficients(i, 0), 0.0, 1e-12);
  solver::Grid g;
  g.n_cells = 1;
  g.dr = 1.0;
  g.r_centers = {1.0};
  const auto m = s.analytic_moments(g, 0.0);
  EXPECT_NEAR(m.mean[0], 0.7, 1e-12);
  EXPECT_NEAR(m.std[0], 0.0, 1e-12);
}

TEST(Apc, OrderZeroHasZeroStd) {
  const auto set = theta();
  const auto bases = apc::build_bases(set, 1);
  const auto nodes = apc::pcm_points(bases, 0, set);
  ASSERT_EQ(nodes.size(), 1u);
  const auto s = apc::fit_pcm(bases, 0, nodes, {{0.25, 0.5}});
  solver::Grid g;
  g.n_cells = 2;
  g.dr = 1.0;
  g.r_centers = {1.0, 2.0};
  const auto m = s.analytic_moments(g, 0.0);
  EXPECT_DOUBLE_EQ(m.mean[0], 0.25);
  EXPECT_DOUBLE_EQ(m.std[0], 0.0);
  EXPECT_DOUBLE_EQ(m.std[1], 0.0);
}

TEST(Apc, AnalyticMomentsMatchProductMeasureMoments) {
  // The tensor basis is orthonormal under the product of the empirical
  // marginals, so the analytic moments equal the sample moments over the
  // full tensor product of the marginal samples.
  const auto set = theta(24);
  const auto bases = apc::build_bases(set, 3);
  const auto nodes = apc::pcm_points(bases, 2, set);
  const auto s = apc::fit_pcm(bases, 2, nodes, outputs_of(nodes, cubic));
  stochastic::SampleSet product;
  for (const auto& a : set.samples) {
    for (const auto& b : set.samples) {
      for (const auto& c : set.samples) product.samples.push_back({a.omega1, b.omega2, c.omega3});
    }
  }
  solver::Grid g;
  g.n_cells = 2;
  g.dr = 1.0;
  g.r_centers = {1.0, 2.0};
  const auto analytic = s.analytic_moments(g, 0.0);
  const auto sampled = apc::pce_moments(s, product, g, 0.0, false);
  const double n = static_cast<double>(product.size());
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(analytic.mean[j], sampled.mean[j], 1e-10);
    EXPECT_NEAR(analytic.std[j], sampled.std[j] * std::sqrt((n - 1.0) / n), 1e-10);
  }
}

TEST(Apc, ScaleEquivariance) {
  // Rescaling omega1 together with the model leaves predictions unchanged.
  auto set = theta();
  auto scaled = set;
  for (auto& w : scaled.samples) w.omega1 = 4.0 * w.omega1 + 1.0;
  const auto b1 = apc::build_bases(set, 3);
  const auto b2 = apc::build_bases(scaled, 3);
  const auto n1 = apc::pcm_points(b1, 2, set);
  const auto n2 = apc::pcm_points(b2, 2, scaled);
  ASSERT_EQ(n1.size(), n2.size());
  std::vector<std::vector<double>> y1, y2;
  for (std::size_t i = 0; i < n1.size(); ++i) {
    EXPECT_NEAR(n2[i].omega1, 4.0 * n1[i].omega1 + 1.0, 1e-9);
    y1.push_back({std::sin(n1[i].omega1) + n1[i].omega3});
    y2.push_back({std::sin((n2[i].omega1 - 1.0) / 4.0) + n2[i].omega3});
  }
  const auto s1 = apc::fit_pcm(b1, 2, n1, y1);
  const auto s2 = apc::fit_pcm(b2, 2, n2, y2);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_NEAR(s1.evaluate(set.samples[i])[0], s2.evaluate(scaled.samples[i])[0], 1e-8);
  }
}

TEST(Apc, DegenerateMomentsFail) {
  // Two-point distribution: order 2 needs three support points.
  const std::vector<double> values{-1.0, 1.0, -1.0, 1.0};
  EXPECT_THROW(apc::build_basis_from_samples(values, 2), NumericError);
  try {
    apc::build_basis_from_samples(values, 2);
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("lower order"), std::string::npos);
  }
  const std::vector<double> constant(10, 3.0);
  EXPECT_THROW(apc::build_basis_from_samples(constant, 1), NumericError);
  EXPECT_NO_THROW(apc::build_basis_from_samples(constant, 0));
}

TEST(Apc, OrderCaps) {
  const auto set = theta(200);
  physics::ScenarioConfig cfg;
  cfg.n_cells = 10;
  ModelRunner runner(cfg, SolverConfig{});
  EXPECT_THROW(apc::build_pcm(set, 6, runner), ConfigError);
  EXPECT_THROW(apc::build_ft(set, 11, runner), ConfigError);
  EXPECT_EQ(runner.solver_invocations(), 0u);
}
