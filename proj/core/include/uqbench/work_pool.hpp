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

#include <cstddef>
#include <functional>

namespace uqbench {

/// Fixed-width fork-join pool for independent jobs. Each parallel_for call
/// spawns its workers and joins them before returning; results are written
/// by index, so the outcome never depends on the width.
class WorkPool {
 public:
  /// Width from UQBENCH_THREADS, else the hardware concurrency.
  static std::size_t default_width();

  explicit WorkPool(std::size_t width = default_width());

  std::size_t width() const { return width_; }

  /// Runs fn(i) for i in [0, n). The first exception thrown by any job is
  /// rethrown after all workers have stopped.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) const;

  /// Splits [0, n) into at most width() contiguous ranges fn(begin, end).
  void parallel_ranges(std::size_t n,
                       const std::function<void(std::size_t, std::size_t)>& fn) const;

 private:
  std::size_t width_;
};

}  // namespace uqbench
