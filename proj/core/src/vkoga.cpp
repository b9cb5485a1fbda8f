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

#include "uqbench/vkoga.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uqbench/errors.hpp"

namespace uqbench::vkoga {

namespace {

double distance(const Point3& x, const Point3& y) {
  const double a = x[0] - y[0];
  const double b = x[1] - y[1];
  const double c = x[2] - y[2];
  return std::sqrt(a * a + b * b + c * c);
}

std::string delta_text(double delta) {
  std::ostringstream out;
  out << delta;
  return out.str();
}

}  // namespace

DeltaConvention parse_convention(const std::string& name) {
  if (name == "scaled-distance") return DeltaConvention::kScaledDistance;
  if (name == "scaled-radius") return DeltaConvention::kScaledRadius;
  throw ConfigError("unknown delta convention '" + name + "' (scaled-distance|scaled-radius)");
}

std::string convention_name(DeltaConvention c) {
  return c == DeltaConvention::kScaledDistance ? "scaled-distance" : "scaled-radius";
}

double wendland_c2(double s) {
  if (s >= 1.0) return 0.0;
  const double t = 1.0 - s;
  const double t2 = t * t;
  return t2 * t2 * (4.0 * s + 1.0);
}

void KernelSpec::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("kernel delta must be positive");
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw ConfigError("kernel jitter must be >= 0");
}

double KernelSpec::operator()(const Point3& x, const Point3& y) const {
  const double r = distance(x, y);
  if (r == 0.0) return 1.0 + jitter;
  return wendland_c2(convention == DeltaConvention::kScaledDistance ? delta * r : r / delta);
}

CandidateSet build_candidates(const std::vector<Point3>& cloud, std::size_t resolution) {
  if (resolution < 2) throw ConfigError("candidate grid resolution must be at least 2");
  if (cloud.empty()) throw DomainError("candidate set of an empty cloud");
  CandidateSet out;
  out.resolution = resolution;
  for (std::size_t d = 0; d < 3; ++d) {
    out.box.lower[d] = out.box.upper[d] = cloud.front()[d];
  }
  for (const auto& p : cloud) {
    for (std::size_t d = 0; d < 3; ++d) {
      out.box.lower[d] = std::min(out.box.lower[d], p[d]);
      out.box.upper[d] = std::max(out.box.upper[d], p[d]);
    }
  }
  for (std::size_t d = 0; d < 3; ++d) {
    if (!(out.box.upper[d] > out.box.lower[d])) throw DomainError("point cloud is flat");
  }
  std::vector<Point3> unit;
  unit.reserve(cloud.size());
  for (const auto& p : cloud) {
    Point3 u{};
    for (std::size_t d = 0; d < 3; ++d) {
      u[d] = (p[d] - out.box.lower[d]) / (out.box.upper[d] - out.box.lower[d]);
    }
    unit.push_back(u);
  }
  const geometry::ConvexHull hull(unit);
  out.hull_facets = hull.facets().size();
  const double step = 1.0 / static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      for (std::size_t k = 0; k < resolution; ++k) {
        const Point3 x{static_cast<double>(i) * step, static_cast<double>(j) * step,
                       static_cast<double>(k) * step};
        if (hull.contains(x)) out.points.push_back(x);
      }
    }
  }
  return out;
}

CandidateSet build_candidates(const stochastic::SampleSet& set, std::size_t resolution) {
  std::vector<Point3> cloud;
  cloud.reserve(set.size());
  for (const auto& s : set.samples) cloud.push_back({s.omega1, s.omega2, s.omega3});
  return build_candidates(cloud, resolution);
}

PGreedy::PGreedy(KernelSpec kernel, std::vector<Point3> candidates, std::size_t n_max,
                 WorkPool pool, double saturation)
    : kernel_(kernel),
      candidates_(std::move(candidates)),
      n_max_(std::min(n_max, candidates_.size())),
      pool_(pool),
      saturation_(saturation) {
  kernel_.validate();
  if (candidates_.empty()) throw ConfigError("P-greedy needs at least one candidate");
  basis_.assign(candidates_.size() * n_max_, 0.0);
  power2_.resize(candidates_.size());
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    power2_[i] = kernel_(candidates_[i], candidates_[i]);
  }
}

bool PGreedy::step() {
  if (saturated_ || selected_.size() >= n_max_) return false;
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates_.size(); ++i) {
    if (power2_[i] > power2_[best] ||
        (power2_[i] == power2_[best] && candidates_[i] < candidates_[best])) {
      best = i;
    }
  }
  const double p2 = power2_[best];
  if (!(p2 >= saturation_)) {
    saturated_ = true;
    return false;
  }
  history_.push_back(p2);
  const std::size_t n = selected_.size();
  const double p = std::sqrt(p2);
  const Point3 star = candidates_[best];
  const double* row_star = &basis_[best * n_max_];
  pool_.parallel_ranges(candidates_.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double* row = &basis_[i * n_max_];
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row_star[j] * row[j];
      const double v = (kernel_(candidates_[i], star) - acc) / p;
      row[n] = v;
      power2_[i] = std::max(0.0, power2_[i] - v * v);
    }
  });
  // The new basis value at the center itself is P(x*) up to round-off.
  basis_[best * n_max_ + n] = p;
  power2_[best] = 0.0;
  selected_.push_back(best);
  return true;
}

std::size_t PGreedy::run(std::size_t n) {
  while (selected_.size() < n && step()) {
  }
  return selected_.size();
}

std::vector<double> KernelModel::evaluate_unit(const Point3& x) const {
  std::vector<double> out(static_cast<std::size_t>(alpha.cols()), 0.0);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double k = kernel(x, centers[i]);
    if (k == 0.0) continue;
    for (std::size_t c = 0; c < out.size(); ++c) {
      out[c] += k * alpha(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

std::vector<double> KernelModel::evaluate(const UncertainInput& omega) const {
  return evaluate_unit(box.to_unit(omega));
}

KernelModel fit(const PGreedy& greedy, std::size_t n, const stochastic::Box& box,
                const std::vector<std::vector<double>>& outputs) {
  if (n == 0 || n > greedy.size()) throw ConfigError("fit needs 1..size() selected centers");
  if (outputs.size() < n) throw ConfigError("missing model outputs for the selected centers");
  const auto m = static_cast<Eigen::Index>(outputs.front().size());
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(nn, nn);
  Eigen::MatrixXd y(nn, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          greedy.newton(greedy.selected()[i], j);
    }
    if (static_cast<Eigen::Index>(outputs[i].size()) != m) {
      throw ConfigError("model outputs differ in length");
    }
    for (Eigen::Index c = 0; c < m; ++c) {
      y(static_cast<Eigen::Index>(i), c) = outputs[i][static_cast<std::size_t>(c)];
    }
  }
  const double diag_min = l.diagonal().minCoeff();
  if (!(diag_min > 0.0) || !std::isfinite(l.sum())) {
    throw NumericError("kernel system is numerically singular for delta " +
                       delta_text(greedy.kernel().delta));
  }
  const Eigen::MatrixXd c = l.triangularView<Eigen::Lower>().solve(y);
  KernelModel model;
  model.kernel = greedy.kernel();
  model.box = box;
  model.alpha = l.transpose().triangularView<Eigen::Upper>().solve(c);
  for (std::size_t i = 0; i < n; ++i) {
    model.centers.push_back(greedy.candidates()[greedy.selected()[i]]);
  }
  return model;
}

std::vector<ScheduleEntry> schedule_run(const stochastic::SampleSet& /*set*/,
                                        const CandidateSet& candidates,
                                        const std::vector<double>& deltas,
                                        const std::vector<std::size_t>& ns, ModelRunner& runner,
                                        DeltaConvention convention, double jitter) {
  std::vector<std::size_t> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty() || sorted.front() == 0) throw ConfigError("checkpoints must be positive");
  std::vector<ScheduleEntry> out;
  for (double delta : deltas) {
    PGreedy greedy(KernelSpec{delta, convention, jitter}, candidates.points, sorted.back(),
                   runner.pool());
    greedy.run(sorted.back());
    std::vector<UncertainInput> inputs;
    for (std::size_t idx : greedy.selected()) {
      const auto& x = candidates.points[idx];
      inputs.push_back(candidates.box.from_unit({x[0], x[1], x[2]}));
    }
    const auto outputs = runner.run(inputs);
    for (std::size_t n : sorted) {
      ScheduleEntry entry;
      entry.delta = delta;
      entry.requested_n = n;
      entry.model = fit(greedy, std::min(n, greedy.size()), candidates.box, outputs);
      out.push_back(std::move(entry));
    }
  }
  return out;
}

MomentField kernel_moments(const KernelModel& model, const stochastic::SampleSet& set,
                           const solver::Grid& grid, double t, bool clamp) {
  std::vector<std::vector<double>> outputs(set.size());
  WorkPool().parallel_for(set.size(), [&](std::size_t i) {
    outputs[i] = model.evaluate(set.samples[i]);
  });
  MomentAccumulator acc(grid.n_cells);
  for (const auto& y : outputs) acc.add(y, clamp);
  return acc.finish(grid, t);
}

}  // namespace uqbench::vkoga
