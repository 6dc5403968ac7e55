// Copyright 2026 The UGCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ugcs::geom {

struct Aabb {
  Eigen::Vector3d min = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d max = Eigen::Vector3d::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Eigen::Vector3d& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  bool contains(const Eigen::Vector3d& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  double squared_distance(const Eigen::Vector3d& p) const {
    const Eigen::Vector3d d = (min - p).cwiseMax(p - max).cwiseMax(0.0);
    return d.squaredNorm();
  }
};

// Axis-aligned bounding-volume hierarchy over triangles, median split on the
// longest centroid axis. Leaves hold at most kLeafSize triangles.
class Bvh {
 public:
  struct Node {
    Aabb box;
    std::int32_t left = -1;   // child index, -1 for leaves
    std::int32_t right = -1;
    std::int32_t first = 0;   // leaf range into order()
    std::int32_t count = 0;
  };
  static constexpr int kLeafSize = 4;

  Bvh() = default;
  Bvh(const std::vector<Eigen::Vector3d>& vertices, const std::vector<std::array<int, 3>>& triangles);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& order() const { return order_; }
  bool empty() const { return nodes_.empty(); }

 private:
  std::vector<Node> nodes_;
  std::vector<int> order_;
};

// Closest-feature classification used for pseudo-normal sign tests.
enum class Feature { kFace, kEdge, kVertex };

// Triangle mesh in meters. Immutable after construction: degenerate triangles
// (area < 1e-12 m^2) are dropped, normals and the BVH are built once.
class TriMesh {
 public:
  static constexpr double kDegenerateArea = 1e-12;

  TriMesh() = default;
  // Throws InvalidArgument on out-of-range indices or non-finite vertices.
  TriMesh(std::vector<Eigen::Vector3d> vertices, std::vector<std::array<int, 3>> triangles);

  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Eigen::Vector3d>& vertex_normals() const { return vertex_normals_; }
  const std::vector<Eigen::Vector3d>& face_normals() const { return face_normals_; }
  const std::vector<double>& face_areas() const { return face_areas_; }
  const Bvh& bvh() const { return bvh_; }
  const Aabb& bounds() const { return bounds_; }

  bool empty() const { return triangles_.empty(); }
  // Every undirected edge is shared by exactly two triangles.
  bool watertight() const { return watertight_; }
  std::size_t dropped_degenerates() const { return dropped_; }

  Eigen::Vector3d edge_pseudo_normal(int a, int b) const;
  const Eigen::Vector3d& vertex_pseudo_normal(int v) const { return vertex_pseudo_normals_[v]; }

  TriMesh transformed(const Eigen::Isometry3d& transform) const;
  TriMesh scaled(const Eigen::Vector3d& factors) const;

  // Concatenation; watertightness is recomputed on the union.
  static TriMesh merge(const std::vector<TriMesh>& parts);

 private:
  static std::uint64_t edge_key(int a, int b);

  std::vector<Eigen::Vector3d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Eigen::Vector3d> face_normals_;
  std::vector<double> face_areas_;
  std::vector<Eigen::Vector3d> vertex_normals_;
  std::vector<Eigen::Vector3d> vertex_pseudo_normals_;
  std::unordered_map<std::uint64_t, Eigen::Vector3d> edge_pseudo_normals_;
  Bvh bvh_;
  Aabb bounds_;
  bool watertight_ = false;
  std::size_t dropped_ = 0;
};

struct RayHit {
  Eigen::Vector3d point;
  int triangle_index = -1;
  double distance = 0.0;
};

struct ClosestPoint {
  Eigen::Vector3d point;
  int triangle_index = -1;
  double distance = 0.0;
  Feature feature = Feature::kFace;
  // Feature vertices: a for vertex, (a, b) for edge.
  int a = -1;
  int b = -1;
};

struct SignedDistance {
  double value = 0.0;
  // False when the mesh is not watertight; the sign is then a best effort
  // from pseudo-normals and callers needing inside/outside must reject it.
  bool sign_reliable = true;
  ClosestPoint closest;
};

// Rays start at `origin`; hits closer than 1e-9 m are ignored. Ties in
// distance resolve to the lower triangle index.
std::optional<RayHit> ray_intersect_first(const TriMesh& mesh, const Eigen::Vector3d& origin,
                                          const Eigen::Vector3d& dir);

// Throws InvalidArgument on an empty mesh. Ties resolve to the lower index.
ClosestPoint closest_point(const TriMesh& mesh, const Eigen::Vector3d& p);

// Negative inside, positive outside, via angle-weighted pseudo-normals.
SignedDistance signed_distance(const TriMesh& mesh, const Eigen::Vector3d& p);

// Primitive-level helpers, exposed for reuse by other modules.
std::optional<double> intersect_triangle(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                         const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                                         const Eigen::Vector3d& v2);

}  // namespace ugcs::geom
