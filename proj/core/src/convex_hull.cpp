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

#include "uqbench/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "uqbench/errors.hpp"

namespace uqbench::geometry {

namespace {

Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point3 cross(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

HalfSpace plane_of(const std::vector<Point3>& pts, const std::array<std::size_t, 3>& f) {
  Point3 n = cross(sub(pts[f[1]], pts[f[0]]), sub(pts[f[2]], pts[f[0]]));
  const double len = norm(n);
  for (double& c : n) c /= len;
  return {n, dot(n, pts[f[0]])};
}

}  // namespace

ConvexHull::ConvexHull(const std::vector<Point3>& pts) {
  if (pts.size() < 4) throw DomainError("convex hull needs at least four points");
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, norm(sub(p, pts.front())));
  if (scale == 0.0) throw DomainError("convex hull of identical points");
  const double eps = 1e-12 * scale;

  // Initial tetrahedron: extreme point, farthest point, farthest from the
  // line, farthest from the plane.
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i] < pts[i0]) i0 = i;
  }
  std::size_t i1 = i0;
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = norm(sub(pts[i], pts[i0]));
    if (d > best) best = d, i1 = i;
  }
  std::size_t i2 = i0;
  best = 0.0;
  const Point3 axis = sub(pts[i1], pts[i0]);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = norm(cross(axis, sub(pts[i], pts[i0])));
    if (d > best) best = d, i2 = i;
  }
  if (best <= eps * scale) throw DomainError("convex hull input is collinear");
  std::size_t i3 = i0;
  best = 0.0;
  Point3 normal = cross(axis, sub(pts[i2], pts[i0]));
  const double normal_len = norm(normal);
  for (double& c : normal) c /= normal_len;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(dot(normal, sub(pts[i], pts[i0])));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps) throw DomainError("convex hull input is coplanar");

  std::vector<std::array<std::size_t, 3>> faces{{i0, i1, i2}, {i0, i3, i1}, {i1, i3, i2},
                                                {i2, i3, i0}};
  const Point3 centroid{(pts[i0][0] + pts[i1][0] + pts[i2][0] + pts[i3][0]) / 4.0,
                        (pts[i0][1] + pts[i1][1] + pts[i2][1] + pts[i3][1]) / 4.0,
                        (pts[i0][2] + pts[i1][2] + pts[i2][2] + pts[i3][2]) / 4.0};
  for (auto& f : faces) {
    const HalfSpace h = plane_of(pts, f);
    if (dot(h.normal, centroid) > h.offset) std::swap(f[1], f[2]);
  }
  std::vector<HalfSpace> planes;
  for (const auto& f : faces) planes.push_back(plane_of(pts, f));

  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<bool> visible(faces.size(), false);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (dot(planes[f].normal, pts[p]) - planes[f].offset > eps) {
        visible[f] = true;
        any = true;
      }
    }
    if (!any) continue;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      for (int e = 0; e < 3; ++e) edges.emplace(faces[f][e], faces[f][(e + 1) % 3]);
    }
    std::vector<std::array<std::size_t, 3>> next_faces;
    std::vector<HalfSpace> next_planes;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (visible[f]) continue;
      next_faces.push_back(faces[f]);
      next_planes.push_back(planes[f]);
    }
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a}) != 0) continue;
      const std::array<std::size_t, 3> face{a, b, p};
      next_faces.push_back(face);
      next_planes.push_back(plane_of(pts, face));
    }
    faces = std::move(next_faces);
    planes = std::move(next_planes);
  }
  facets_ = std::move(faces);
  planes_ = std::move(planes);
}

bool ConvexHull::contains(const Point3& x, double tolerance) const {
  for (const auto& h : planes_) {
    if (dot(h.normal, x) - h.offset > tolerance) return false;
  }
  return true;
}

}  // namespace uqbench::geometry
