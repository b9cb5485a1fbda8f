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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uqbench/convex_hull.hpp"
#include "uqbench/moments.hpp"
#include "uqbench/run_cache.hpp"
#include "uqbench/stochastic.hpp"
#include "uqbench/work_pool.hpp"

namespace uqbench::vkoga {

using geometry::Point3;

/// How the shape parameter enters the kernel: s = delta * r (default, support
/// radius 1/delta) or s = r / delta.
enum class DeltaConvention { kScaledDistance, kScaledRadius };

DeltaConvention parse_convention(const std::string& name);
std::string convention_name(DeltaConvention c);

/// (1 - s)_+^4 (4 s + 1).
double wendland_c2(double s);

struct KernelSpec {
  double delta = 0.2;
  DeltaConvention convention = DeltaConvention::kScaledDistance;
  /// Added on the diagonal, k(x, x) = 1 + jitter; 0 keeps strict interpolation.
  double jitter = 0.0;

  void validate() const;
  double operator()(const Point3& x, const Point3& y) const;
};

/// Grid points of the minimal box around the cloud that lie in its convex
/// hull, in unit-cube coordinates of that box, lexicographically ordered.
struct CandidateSet {
  std::vector<Point3> points;
  stochastic::Box box;
  std::size_t hull_facets = 0;
  std::size_t resolution = 0;
};

CandidateSet build_candidates(const std::vector<Point3>& cloud, std::size_t resolution = 50);
CandidateSet build_candidates(const stochastic::SampleSet& set, std::size_t resolution = 50);

/// P-greedy selection with the Newton basis stored over the whole candidate
/// set (row-major, one row per candidate).
class PGreedy {
 public:
  PGreedy(KernelSpec kernel, std::vector<Point3> candidates, std::size_t n_max,
          WorkPool pool = WorkPool(), double saturation = 1e-14);

  /// Adds one center. Returns false (and selects nothing) once the largest
  /// squared power value drops below the saturation threshold or n_max is hit.
  bool step();
  /// Steps until n centers are selected or the selection saturates.
  std::size_t run(std::size_t n);

  std::size_t size() const { return selected_.size(); }
  bool saturated() const { return saturated_; }
  const std::vector<std::size_t>& selected() const { return selected_; }
  const std::vector<double>& power2() const { return power2_; }
  /// Largest squared power value seen before each selection.
  const std::vector<double>& max_power2_history() const { return history_; }
  const std::vector<Point3>& candidates() const { return candidates_; }
  const KernelSpec& kernel() const { return kernel_; }
  /// v_j(candidate) for j < size().
  double newton(std::size_t candidate, std::size_t j) const {
    return basis_[candidate * n_max_ + j];
  }

 private:
  KernelSpec kernel_;
  std::vector<Point3> candidates_;
  std::size_t n_max_;
  WorkPool pool_;
  double saturation_;
  std::vector<double> basis_;
  std::vector<double> power2_;
  std::vector<std::size_t> selected_;
  std::vector<double> history_;
  bool saturated_ = false;
};

/// s(x) = sum_i alpha_i k(x, x_i) on unit-cube inputs of `box`.
struct KernelModel {
  KernelSpec kernel;
  stochastic::Box box;
  std::vector<Point3> centers;
  Eigen::MatrixXd alpha;  // n_centers x n_outputs

  std::vector<double> evaluate_unit(const Point3& x) const;
  std::vector<double> evaluate(const UncertainInput& omega) const;
  std::size_t cost() const { return centers.size(); }
};

/// Interpolant through the first `n` selected centers with outputs[i] at
/// center i, solved through the triangular Newton factor.
KernelModel fit(const PGreedy& greedy, std::size_t n, const stochastic::Box& box,
                const std::vector<std::vector<double>>& outputs);

struct ScheduleEntry {
  double delta = 0.0;
  std::size_t requested_n = 0;
  KernelModel model;
};

/// One greedy pass per delta, checkpointed at every requested n (nested
/// centers). Models are returned in (delta, n) order.
std::vector<ScheduleEntry> schedule_run(const stochastic::SampleSet& set,
                                        const CandidateSet& candidates,
                                        const std::vector<double>& deltas,
                                        const std::vector<std::size_t>& ns, ModelRunner& runner,
                                        DeltaConvention convention =
                                            DeltaConvention::kScaledDistance,
                                        double jitter = 0.0);

MomentField kernel_moments(const KernelModel& model, const stochastic::SampleSet& set,
                           const solver::Grid& grid, double t, bool clamp = true);

}  // namespace uqbench::vkoga
