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

#include "uqbench/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "uqbench/errors.hpp"

namespace uqbench::stochastic {

namespace {

const boost::math::normal kStandardNormal(0.0, 1.0);

double standard_cdf(double z) { return boost::math::cdf(kStandardNormal, z); }

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::string normalized = line;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::replace(normalized.begin(), normalized.end(), ';', ' ');
  std::replace(normalized.begin(), normalized.end(), '\t', ' ');
  std::istringstream in(normalized);
  std::vector<std::string> fields;
  for (std::string f; in >> f;) fields.push_back(f);
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end != text.c_str() && *end == '\0';
}

}  // namespace

Marginal Marginal::uniform(double lo, double hi) {
  Marginal m;
  m.family = Family::kUniform;
  m.a = lo;
  m.b = hi;
  m.lower = lo;
  m.upper = hi;
  return m;
}

Marginal Marginal::truncated_normal(double mean, double sd, double lo, double hi) {
  Marginal m;
  m.family = Family::kTruncatedNormal;
  m.a = mean;
  m.b = sd;
  m.lower = lo;
  m.upper = hi;
  return m;
}

Marginal::Family Marginal::parse_family(const std::string& name) {
  if (name == "uniform") return Family::kUniform;
  if (name == "truncated_normal" || name == "truncnorm") return Family::kTruncatedNormal;
  throw ConfigError("unsupported distribution family '" + name + "'");
}

double Marginal::support_lower() const { return family == Family::kUniform ? a : lower; }
double Marginal::support_upper() const { return family == Family::kUniform ? b : upper; }

double Marginal::cdf(double x) const {
  if (x <= support_lower()) return 0.0;
  if (x >= support_upper()) return 1.0;
  if (family == Family::kUniform) return (x - a) / (b - a);
  const double lo = standard_cdf((lower - a) / b);
  const double hi = standard_cdf((upper - a) / b);
  return (standard_cdf((x - a) / b) - lo) / (hi - lo);
}

double Marginal::quantile(double p) const {
  if (family == Family::kUniform) return a + p * (b - a);
  const double lo = standard_cdf((lower - a) / b);
  const double hi = standard_cdf((upper - a) / b);
  const double z = boost::math::quantile(kStandardNormal, lo + p * (hi - lo));
  return std::clamp(a + b * z, lower, upper);
}

DistributionSpec DistributionSpec::synthetic_default() {
  DistributionSpec spec;
  spec.marginals[0] = Marginal::truncated_normal(0.0, 0.15, -0.45, 0.45);
  spec.marginals[1] = Marginal::uniform(1.5, 4.5);
  spec.marginals[2] = Marginal::truncated_normal(0.15, 0.03, 0.05, 0.3);
  return spec;
}

void DistributionSpec::validate() const {
  for (std::size_t d = 0; d < kDims; ++d) {
    const Marginal& m = marginals[d];
    if (m.family == Marginal::Family::kUniform && !(m.b > m.a)) {
      throw ConfigError("uniform marginal needs lower < upper in dimension " +
                        std::to_string(d + 1));
    }
    if (m.family == Marginal::Family::kTruncatedNormal && (!(m.b > 0.0) || !(m.upper > m.lower))) {
      throw ConfigError("truncated normal needs sd > 0 and lower < upper in dimension " +
                        std::to_string(d + 1));
    }
  }
  const double lo1 = marginals[0].support_lower();
  const double lo2 = marginals[1].support_lower();
  const double lo3 = marginals[2].support_lower();
  const double hi3 = marginals[2].support_upper();
  if (lo1 <= -1.0) throw ConfigError("omega1 support must stay above -1");
  if (lo2 <= 0.0) throw ConfigError("omega2 support must be positive");
  if (lo3 <= 0.0 || hi3 >= 1.0) throw ConfigError("omega3 support must lie inside (0,1)");
}

double coordinate(const UncertainInput& omega, std::size_t dim) {
  switch (dim) {
    case 0: return omega.omega1;
    case 1: return omega.omega2;
    case 2: return omega.omega3;
    default: throw ConfigError("input dimension out of range");
  }
}

void set_coordinate(UncertainInput& omega, std::size_t dim, double value) {
  switch (dim) {
    case 0: omega.omega1 = value; break;
    case 1: omega.omega2 = value; break;
    case 2: omega.omega3 = value; break;
    default: throw ConfigError("input dimension out of range");
  }
}

std::vector<double> SampleSet::column(std::size_t dim) const {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = coordinate(samples[i], dim);
  return out;
}

SampleSet SampleSet::head(std::size_t n) const {
  SampleSet out = *this;
  out.samples.resize(std::min(n, samples.size()));
  return out;
}

SampleSet load_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sample file " + path.string());
  SampleSet set;
  set.origin = SampleSet::Origin::kLoaded;
  set.source = path.string();
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::array<double, kDims> v{};
    bool numeric = fields.size() == kDims;
    for (std::size_t d = 0; numeric && d < kDims; ++d) numeric = parse_double(fields[d], v[d]);
    if (!numeric) {
      if (first_content) {
        first_content = false;  // header
        continue;
      }
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected three numeric columns");
    }
    first_content = false;
    UncertainInput omega{v[0], v[1], v[2]};
    try {
      physics::validate(omega);
    } catch (const DomainError& e) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    set.samples.push_back(omega);
  }
  if (set.samples.empty()) throw ParseError(path.string() + ": no samples found");
  return set;
}

void save_samples(const SampleSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write sample file " + path.string());
  out << "omega1,omega2,omega3\n" << std::setprecision(17);
  for (const auto& s : set.samples) out << s.omega1 << ',' << s.omega2 << ',' << s.omega3 << '\n';
}

SampleSet generate_samples(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("sample count must be at least 1");
  spec.validate();
  std::mt19937_64 rng(seed);
  // Top 53 bits mapped to the open interval (0, 1).
  auto uniform01 = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  SampleSet set;
  set.origin = SampleSet::Origin::kGenerated;
  set.seed = seed;
  set.source = "generated(seed=" + std::to_string(seed) + ")";
  set.samples.resize(n);
  for (auto& s : set.samples) {
    for (std::size_t d = 0; d < kDims; ++d) {
      set_coordinate(s, d, spec.marginals[d].quantile(uniform01()));
    }
  }
  return set;
}

std::vector<double> raw_moments(const std::vector<double>& values, std::size_t k_max) {
  std::vector<CompensatedSum> sums(k_max + 1);
  for (double x : values) {
    double power = 1.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
      sums[k].add(power);
      power *= x;
    }
  }
  std::vector<double> out(k_max + 1, 0.0);
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  for (std::size_t k = 0; k <= k_max; ++k) out[k] = sums[k].value() / n;
  out[0] = 1.0;
  return out;
}

std::vector<double> raw_moments(const SampleSet& set, std::size_t dim, std::size_t k_max) {
  if (dim < 1 || dim > kDims) throw ConfigError("moment dimension must be 1, 2 or 3");
  return raw_moments(set.column(dim - 1), k_max);
}

Box Box::expanded(double fraction) const {
  Box out = *this;
  for (std::size_t d = 0; d < kDims; ++d) {
    double width = upper[d] - lower[d];
    if (width <= 0.0) width = std::max(std::abs(upper[d]), 1.0);
    out.lower[d] -= fraction * width;
    out.upper[d] += fraction * width;
  }
  return out;
}

std::array<double, kDims> Box::to_unit(const UncertainInput& omega) const {
  std::array<double, kDims> x{};
  for (std::size_t d = 0; d < kDims; ++d) {
    x[d] = (coordinate(omega, d) - lower[d]) / (upper[d] - lower[d]);
  }
  return x;
}

UncertainInput Box::from_unit(const std::array<double, kDims>& x) const {
  UncertainInput omega;
  for (std::size_t d = 0; d < kDims; ++d) {
    set_coordinate(omega, d, lower[d] + x[d] * (upper[d] - lower[d]));
  }
  return omega;
}

bool Box::contains(const UncertainInput& omega) const {
  for (std::size_t d = 0; d < kDims; ++d) {
    const double v = coordinate(omega, d);
    if (v < lower[d] || v > upper[d]) return false;
  }
  return true;
}

Box bounding_box(const SampleSet& set) {
  if (set.samples.empty()) throw ConfigError("bounding box of an empty sample set");
  Box box;
  for (std::size_t d = 0; d < kDims; ++d) {
    box.lower[d] = box.upper[d] = coordinate(set.samples.front(), d);
  }
  for (const auto& s : set.samples) {
    for (std::size_t d = 0; d < kDims; ++d) {
      box.lower[d] = std::min(box.lower[d], coordinate(s, d));
      box.upper[d] = std::max(box.upper[d], coordinate(s, d));
    }
  }
  return box;
}

}  // namespace uqbench::stochastic
