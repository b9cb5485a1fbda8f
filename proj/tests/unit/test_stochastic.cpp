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

#include <cmath>
#include <filesystem>
#include <fstream>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "uqbench/errors.hpp"
#include "uqbench/stochastic.hpp"

namespace {

using namespace uqbench;
using namespace uqbench::stochastic;
namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "uqbench_test_stochastic";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

TEST(Marginal, UniformCdfQuantileRoundTrip) {
  const Marginal m = Marginal::uniform(1.5, 4.5);
  EXPECT_DOUBLE_EQ(m.cdf(3.0), 0.5);
  for (double p : {0.0, 0.1, 0.5, 0.99, 1.0}) EXPECT_NEAR(m.cdf(m.quantile(p)), p, 1e-14);
}

TEST(Marginal, TruncatedNormalAgainstClosedForm) {
  const Marginal m = Marginal::truncated_normal(0.15, 0.03, 0.05, 0.3);
  const boost::math::normal n(0.15, 0.03);
  const double z = boost::math::cdf(n, 0.3) - boost::math::cdf(n, 0.05);
  for (double x : {0.06, 0.12, 0.15, 0.2, 0.29}) {
    EXPECT_NEAR(m.cdf(x), (boost::math::cdf(n, x) - boost::math::cdf(n, 0.05)) / z, 1e-12);
    EXPECT_NEAR(m.quantile(m.cdf(x)), x, 1e-10);
  }
  EXPECT_DOUBLE_EQ(m.support_lower(), 0.05);
  EXPECT_DOUBLE_EQ(m.support_upper(), 0.3);
}

TEST(Marginal, UnknownFamily) {
  EXPECT_EQ(Marginal::parse_family("uniform"), Marginal::Family::kUniform);
  EXPECT_THROW(Marginal::parse_family("gamma"), ConfigError);
}

TEST(Samples, GenerationIsReproducibleAndInSupport) {
  const auto spec = DistributionSpec::synthetic_default();
  const auto a = generate_samples(spec, 500, 42);
  const auto b = generate_samples(spec, 500, 42);
  const auto c = generate_samples(spec, 500, 43);
  ASSERT_EQ(a.size(), 500u);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
  EXPECT_EQ(a.origin, SampleSet::Origin::kGenerated);
  for (const auto& s : a.samples) {
    for (std::size_t d = 0; d < kDims; ++d) {
      EXPECT_GE(coordinate(s, d), spec.marginals[d].support_lower());
      EXPECT_LE(coordinate(s, d), spec.marginals[d].support_upper());
    }
  }
  EXPECT_THROW(generate_samples(spec, 0, 1), ConfigError);
}

TEST(Samples, UniformMomentsConverge) {
  DistributionSpec spec = DistributionSpec::synthetic_default();
  const auto set = generate_samples(spec, 40000, 9);
  const auto m = raw_moments(set, 2, 2);
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_NEAR(m[1], 3.0, 0.02);
  EXPECT_NEAR(m[2] - m[1] * m[1], 9.0 / 12.0, 0.02);
}

TEST(Samples, SaveLoadRoundTrip) {
  const auto set = generate_samples(DistributionSpec::synthetic_default(), 50, 5);
  const auto path = temp_file("round_trip.csv");
  save_samples(set, path);
  const auto back = load_samples(path);
  EXPECT_EQ(back.samples, set.samples);
  EXPECT_EQ(back.origin, SampleSet::Origin::kLoaded);
}

TEST(Samples, LoadAcceptsSeparatorsAndNoHeader) {
  const auto path = temp_file("separators.txt");
  write_text(path, "0.1 2.0 0.15\n-0.2;3.0;0.2\n0.0,1.5,0.1\n");
  const auto set = load_samples(path);
  ASSERT_EQ(set.size(), 3u);
  EXPECT_DOUBLE_EQ(set.samples[1].omega1, -0.2);
  EXPECT_DOUBLE_EQ(set.samples[2].omega2, 1.5);
}

TEST(Samples, LoadReportsLineOfBadRows) {
  const auto path = temp_file("bad.csv");
  write_text(path, "omega1,omega2,omega3\n0.1,2.0,0.15\n0.1,abc,0.15\n");
  try {
    load_samples(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
  write_text(path, "0.1,2.0,0.15\n0.1,2.0,1.4\n");
  EXPECT_THROW(load_samples(path), DomainError);
}

TEST(Samples, ColumnsHeadAndBox) {
  SampleSet set;
  set.samples = {{0.1, 2.0, 0.1}, {-0.1, 3.0, 0.2}, {0.0, 2.5, 0.3}};
  EXPECT_EQ(set.column(1), (std::vector<double>{2.0, 3.0, 2.5}));
  EXPECT_EQ(set.head(2).size(), 2u);
  EXPECT_EQ(set.head(10).size(), 3u);
  const Box box = bounding_box(set);
  EXPECT_DOUBLE_EQ(box.lower[0], -0.1);
  EXPECT_DOUBLE_EQ(box.upper[2], 0.3);
  const Box wide = box.expanded(0.01);
  EXPECT_NEAR(wide.lower[1], 2.0 - 0.01, 1e-14);
  const auto unit = wide.to_unit(set.samples[0]);
  const auto back = wide.from_unit(unit);
  EXPECT_NEAR(back.omega2, 2.0, 1e-14);
  EXPECT_TRUE(wide.contains(set.samples[2]));
  EXPECT_FALSE(box.contains({0.5, 2.0, 0.2}));
}

TEST(Samples, RawMomentsCompensated) {
  std::vector<double> v(100000, 0.1);
  const auto m = raw_moments(v, 3);
  EXPECT_NEAR(m[1], 0.1, 1e-16);
  EXPECT_NEAR(m[3], 1e-3, 1e-18);
}

}  // namespace
