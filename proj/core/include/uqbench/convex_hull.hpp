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
#include <vector>

namespace uqbench::geometry {

using Point3 = std::array<double, 3>;

/// Outward facet plane: normal . x <= offset inside.
struct HalfSpace {
  Point3 normal{};
  double offset = 0.0;
};

/// Convex hull of a 3D point cloud as triangular facets (vertex indices,
/// counter-clockwise seen from outside) plus their half-spaces.
class ConvexHull {
 public:
  /// Incremental construction. Throws DomainError for fewer than four
  /// non-coplanar points.
  explicit ConvexHull(const std::vector<Point3>& points);

  const std::vector<std::array<std::size_t, 3>>& facets() const { return facets_; }
  const std::vector<HalfSpace>& half_spaces() const { return planes_; }

  /// True when every facet inequality holds to within `tolerance` (absolute,
  /// in the units of the input).
  bool contains(const Point3& x, double tolerance = 1e-12) const;

 private:
  std::vector<std::array<std::size_t, 3>> facets_;
  std::vector<HalfSpace> planes_;
};

}  // namespace uqbench::geometry
