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

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "uqbench/convex_hull.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/vkoga.hpp"

using namespace uqbench;
using namespace uqbench::vkoga;

namespace {

std::vector<Point3> random_cloud(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u;
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  return pts;
}

double smooth(const Point3& x) { return std::sin(3.0 * x[0]) + x[1] * x[2] - 0.5 * x[2]; }

}  // namespace

TEST(Kernel, WendlandValues) {
  EXPECT_DOUBLE_EQ(wendland_c2(0.0), 1.0);
  EXPECT_DOUBLE_EQ(wendland_c2(1.0), 0.0);
  EXPECT_DOUBLE_EQ(wendland_c2(1.7), 0.0);
  EXPECT_DOUBLE_EQ(wendland_c2(0.5), 0.1875);
  const Point3 a{0.0, 0.0, 0.0};
  const Point3 b{0.6, 0.0, 0.8};  // distance 1
  const KernelSpec dist{0.5, DeltaConvention::kScaledDistance};
  const KernelSpec radius{2.0, DeltaConvention::kScaledRadius};
  EXPECT_DOUBLE_EQ(dist(a, a), 1.0);
  EXPECT_NEAR(dist(a, b), 0.1875, 1e-15);
  EXPECT_NEAR(radius(a, b), 0.1875, 1e-15);
  EXPECT_DOUBLE_EQ(dist(a, b), dist(b, a));
  EXPECT_EQ((KernelSpec{2.0, DeltaConvention::kScaledDistance})(a, b), 0.0);
}

TEST(Kernel, ConventionNamesAndValidation) {
  for (auto c : {DeltaConvention::kScaledDistance, DeltaConvention::kScaledRadius}) {
    EXPECT_EQ(parse_convention(convention_name(c)), c);
  }
  EXPECT_THROW(parse_convention("radius"), ConfigError);
  EXPECT_THROW((KernelSpec{0.0}).validate(), ConfigError);
  EXPECT_THROW((KernelSpec{-1.0}).validate(), ConfigError);
  KernelSpec j{0.2};
  j.jitter = 1e-12;
  const Point3 x{0.1, 0.2, 0.3};
  EXPECT_DOUBLE_EQ(j(x, x), 1.0 + 1e-12);
}

TEST(Kernel, PositiveDefiniteOnRandomPoints) {
  const auto pts = random_cloud(60, 4);
  const KernelSpec k{0.8};
  Eigen::MatrixXd m(60, 60);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 60; ++j) m(i, j) = k(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Candidates, CubeCornersKeepWholeGrid) {
  std::vector<Point3> corners;
  for (double a : {0.0, 1.0}) {
    for (double b : {0.0, 1.0}) {
      for (double c : {0.0, 1.0}) corners.push_back({a, b, c});
    }
  }
  const auto set = build_candidates(corners, 3);
  EXPECT_EQ(set.points.size(), 27u);
  EXPECT_EQ(set.resolution, 3u);
  EXPECT_EQ(set.hull_facets, 12u);
}

TEST(Candidates, SimplexMatchesFeasibilityOracle) {
  const std::vector<Point3> simplex{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto set = build_candidates(simplex, 11);
  // i + j + k <= 10 on an 11^3 grid: C(13, 3).
  EXPECT_EQ(set.points.size(), 286u);
  std::size_t oracle_count = 0;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      for (int k = 0; k <= 10; ++k) {
        if (oracle::in_hull_by_feasibility(simplex, {i / 10.0, j / 10.0, k / 10.0})) ++oracle_count;
      }
    }
  }
  EXPECT_EQ(set.points.size(), oracle_count);
}

TEST(Candidates, RandomCloudMatchesFeasibilityOracle) {
  auto cloud = random_cloud(40, 8);
  for (auto& p : cloud) p = {2.0 * p[0] - 1.0, 0.5 * p[1] + 3.0, p[2] * p[2]};
  const auto set = build_candidates(cloud, 12);
  std::vector<Point3> unit;
  for (const auto& p : cloud) {
    Point3 u{};
    for (std::size_t d = 0; d < 3; ++d) {
      u[d] = (p[d] - set.box.lower[d]) / (set.box.upper[d] - set.box.lower[d]);
    }
    unit.push_back(u);
  }
  std::vector<Point3> expected;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      for (int k = 0; k < 12; ++k) {
        const Point3 x{i / 11.0, j / 11.0, k / 11.0};
        if (oracle::in_hull_by_feasibility(unit, x)) expected.push_back(x);
      }
    }
  }
  ASSERT_GT(expected.size(), 10u);
  ASSERT_EQ(set.points.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(set.points[i][d], expected[i][d], 1e-15);
  }
  // Lexicographic order.
  for (std::size_t i = 1; i < set.points.size(); ++i) EXPECT_LT(set.points[i - 1], set.points[i]);
}

TEST(Candidates, HullContainsItsVertices) {
  const auto cloud = random_cloud(200, 13);
  const geometry::ConvexHull hull(cloud);
  for (const auto& p : cloud) EXPECT_TRUE(hull.contains(p, 1e-12));
  EXPECT_FALSE(hull.contains({1.5, 0.5, 0.5}));
  EXPECT_FALSE(hull.contains({-0.01, -0.01, -0.01}));
}

TEST(Candidates, DegenerateClouds) {
  const std::vector<Point3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  EXPECT_THROW(geometry::ConvexHull{flat}, DomainError);
  const std::vector<Point3> coplanar{{0, 0, 0}, {1, 0, 1}, {0, 1, 0}, {1, 1, 1}, {0.5, 0.5, 0.5}};
  EXPECT_THROW(geometry::ConvexHull{coplanar}, DomainError);
  const std::vector<Point3> three{{0, 0, 0}, {1, 0, 0}, {0, 1, 1}};
  EXPECT_THROW(geometry::ConvexHull{three}, DomainError);
  EXPECT_THROW(build_candidates(flat, 5), DomainError);
}

TEST(PGreedy, FirstCenterIsLexicographicallySmallest) {
  auto cloud = random_cloud(100, 2);
  PGreedy g(KernelSpec{0.7}, cloud, 5);
  ASSERT_TRUE(g.step());
  const auto first = g.selected().front();
  for (const auto& p : cloud) EXPECT_LE(cloud[first], p);
  EXPECT_DOUBLE_EQ(g.max_power2_history().front(), 1.0);
}

TEST(PGreedy, MatchesBruteForce) {
  for (double delta : {0.5, 1.0, 2.0}) {
    const auto cloud = random_cloud(500, 21);
    const KernelSpec k{delta};
    PGreedy g(k, cloud, 25);
    ASSERT_EQ(g.run(25), 25u);
    std::vector<double> oracle_history;
    const auto oracle_centers = oracle::brute_force_greedy(k, cloud, 25, &oracle_history);
    EXPECT_EQ(g.selected(), oracle_centers) << "delta " << delta;
    for (std::size_t s = 0; s < 25; ++s) {
      EXPECT_NEAR(g.max_power2_history()[s], oracle_history[s], 1e-8);
    }
    const auto p2 = oracle::brute_force_power2(k, cloud, oracle_centers);
    for (std::size_t i = 0; i < cloud.size(); ++i) EXPECT_NEAR(g.power2()[i], p2[i], 1e-8);
  }
}

TEST(PGreedy, PowerFunctionNonincreasingAndZeroAtCenters) {
  const auto cloud = random_cloud(400, 5);
  PGreedy g(KernelSpec{0.6}, cloud, 60);
  std::vector<double> prev = g.power2();
  while (g.step()) {
    const auto& now = g.power2();
    for (std::size_t i = 0; i < now.size(); ++i) {
      ASSERT_GE(now[i], 0.0);
      ASSERT_LE(now[i], prev[i] + 1e-12);
    }
    for (std::size_t c : g.selected()) EXPECT_LE(now[c], 1e-8);
    prev = now;
  }
  EXPECT_EQ(g.size(), 60u);
  std::vector<std::size_t> sorted = g.selected();
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t s = 1; s < g.max_power2_history().size(); ++s) {
    EXPECT_LE(g.max_power2_history()[s], g.max_power2_history()[s - 1] + 1e-12);
  }
}

TEST(PGreedy, SaturatesOnDuplicates) {
  const std::vector<Point3> cloud{{0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}, {0.1, 0.1, 0.1}};
  PGreedy g(KernelSpec{0.5}, cloud, 10);
  EXPECT_EQ(g.run(10), 2u);
  EXPECT_TRUE(g.saturated());
  EXPECT_FALSE(g.step());
}

TEST(PGreedy, NMaxIsClampedToCandidates) {
  const auto cloud = random_cloud(5, 3);
  PGreedy g(KernelSpec{1.0}, cloud, 50);
  EXPECT_EQ(g.run(50), 5u);
  EXPECT_THROW(PGreedy(KernelSpec{1.0}, {}, 3), ConfigError);
}

TEST(KernelFit, InterpolatesAtCenters) {
  const auto cloud = random_cloud(800, 6);
  PGreedy g(KernelSpec{0.4}, cloud, 64);
  g.run(64);
  std::vector<std::vector<double>> y;
  for (std::size_t c : g.selected()) y.push_back({smooth(cloud[c]), 1.0 + 0.1 * cloud[c][0]});
  stochastic::Box unit_box;
  unit_box.upper = {1.0, 1.0, 1.0};
  for (std::size_t n : {1u, 4u, 16u, 64u}) {
    const auto model = fit(g, n, unit_box, y);
    ASSERT_EQ(model.centers.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = model.evaluate_unit(cloud[g.selected()[i]]);
      for (std::size_t c = 0; c < 2; ++c) {
        EXPECT_NEAR(v[c], y[i][c], 1e-8 * std::max(1.0, std::abs(y[i][c])));
      }
    }
    // Nested centers.
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(model.centers[i], cloud[g.selected()[i]]);
  }
  const auto one = fit(g, 1, unit_box, y);
  EXPECT_NEAR(one.alpha(0, 0), y[0][0], 1e-14);
  EXPECT_THROW(fit(g, 65, unit_box, y), ConfigError);
  EXPECT_THROW(fit(g, 0, unit_box, y), ConfigError);
}

TEST(KernelFit, ConstantOutputs) {
  const auto cloud = random_cloud(300, 7);
  PGreedy g(KernelSpec{0.3}, cloud, 20);
  g.run(20);
  const std::vector<std::vector<double>> y(20, std::vector<double>{0.42});
  stochastic::Box unit_box;
  unit_box.upper = {1.0, 1.0, 1.0};
  const auto model = fit(g, 20, unit_box, y);
  for (const auto& c : model.centers) EXPECT_NEAR(model.evaluate_unit(c)[0], 0.42, 1e-9);
}

TEST(KernelFit, ErrorBoundedByPowerFunction) {
  // f = sum_j beta_j k(., z_j) has native norm sqrt(beta^T K beta); the
  // interpolation error is bounded by P(x) ||f||.
  const KernelSpec k{0.9};
  const auto cloud = random_cloud(600, 9);
  const auto z = random_cloud(8, 10);
  const std::vector<double> beta{0.5, -1.0, 0.25, 2.0, -0.75, 0.1, 1.2, -0.3};
  double norm2 = 0.0;
  for (std::size_t a = 0; a < z.size(); ++a) {
    for (std::size_t b = 0; b < z.size(); ++b) norm2 += beta[a] * beta[b] * k(z[a], z[b]);
  }
  auto f = [&](const Point3& x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) acc += beta[j] * k(x, z[j]);
    return acc;
  };
  PGreedy g(k, cloud, 40);
  g.run(40);
  std::vector<std::vector<double>> y;
  for (std::size_t c : g.selected()) y.push_back({f(cloud[c])});
  stochastic::Box unit_box;
  unit_box.upper = {1.0, 1.0, 1.0};
  const auto model = fit(g, 40, unit_box, y);
  const double norm = std::sqrt(norm2);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double err = std::abs(f(cloud[i]) - model.evaluate_unit(cloud[i])[0]);
    EXPECT_LE(err, std::sqrt(g.power2()[i]) * norm + 1e-9);
  }
}

namespace {

physics::ScenarioConfig small_scenario() {
  physics::ScenarioConfig cfg;
  cfg.n_cells = 20;
  return cfg;
}

}  // namespace

TEST(KernelSchedule, NestedModelsPerDelta) {
  const auto set =
      stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(), 300, 3);
  const auto candidates = build_candidates(set, 10);
  ASSERT_GT(candidates.points.size(), 16u);
  for (const auto& p : candidates.points) {
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
  ModelRunner runner(small_scenario(), SolverConfig{});
  const auto entries = schedule_run(set, candidates, {0.2, 0.5}, {16, 1, 4}, runner);
  ASSERT_EQ(entries.size(), 6u);
  EXPECT_EQ(entries[0].requested_n, 1u);
  EXPECT_EQ(entries[2].requested_n, 16u);
  EXPECT_DOUBLE_EQ(entries[3].delta, 0.5);
  for (std::size_t e = 0; e + 1 < entries.size(); ++e) {
    if (entries[e].delta != entries[e + 1].delta) continue;
    const auto& small = entries[e].model.centers;
    const auto& big = entries[e + 1].model.centers;
    ASSERT_LE(small.size(), big.size());
    for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], big[i]);
  }
  // Interpolation at the centers of the largest model.
  const auto& m = entries[2].model;
  for (const auto& c : m.centers) {
    const auto omega = m.box.from_unit({c[0], c[1], c[2]});
    const auto y = runner.run_one(omega);
    const auto s = m.evaluate(omega);
    for (std::size_t j = 0; j < y.size(); ++j) EXPECT_NEAR(s[j], y[j], 1e-8);
  }
  // Centers shared between the two deltas are served from the cache.
  std::set<Point3> distinct(entries[2].model.centers.begin(), entries[2].model.centers.end());
  distinct.insert(entries[5].model.centers.begin(), entries[5].model.centers.end());
  EXPECT_EQ(runner.solver_invocations(), distinct.size());
}
