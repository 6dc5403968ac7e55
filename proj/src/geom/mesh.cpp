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

#include "ugcs/geom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ugcs/common/error.hpp"

namespace ugcs::geom {
namespace {

constexpr double kMinHitDistance = 1e-9;

struct TriangleClosest {
  Eigen::Vector3d point;
  Feature feature = Feature::kFace;
  int a = -1;  // local corner indices 0..2
  int b = -1;
};

// Ericson, Real-Time Collision Detection, 5.1.5, with the Voronoi region kept.
TriangleClosest closest_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                    const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a;
  const Eigen::Vector3d ac = c - a;
  const Eigen::Vector3d ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, Feature::kVertex, 0, -1};

  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, Feature::kVertex, 1, -1};

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {a + v * ab, Feature::kEdge, 0, 1};
  }

  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, Feature::kVertex, 2, -1};

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {a + w * ac, Feature::kEdge, 0, 2};
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b + w * (c - b), Feature::kEdge, 1, 2};
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return {a + ab * v + ac * w, Feature::kFace, -1, -1};
}

bool ray_box(const Aabb& box, const Eigen::Vector3d& origin, const Eigen::Vector3d& inv_dir,
             double t_max) {
  double t0 = 0.0;
  double t1 = t_max;
  for (int k = 0; k < 3; ++k) {
    double near = (box.min[k] - origin[k]) * inv_dir[k];
    double far = (box.max[k] - origin[k]) * inv_dir[k];
    if (near > far) std::swap(near, far);
    // NaN from 0 * inf (origin on a slab plane, axis-parallel ray) is skipped.
    if (!std::isnan(near)) t0 = std::max(t0, near);
    if (!std::isnan(far)) t1 = std::min(t1, far);
    if (t0 > t1 * (1.0 + 4e-16) + 1e-15) return false;
  }
  return true;
}

}  // namespace

std::optional<double> intersect_triangle(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                         const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                                         const Eigen::Vector3d& v2) {
  // Moller-Trumbore.
  const Eigen::Vector3d e1 = v1 - v0;
  const Eigen::Vector3d e2 = v2 - v0;
  const Eigen::Vector3d pvec = dir.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-300) return std::nullopt;
  const double inv_det = 1.0 / det;
  const Eigen::Vector3d tvec = origin - v0;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Eigen::Vector3d qvec = tvec.cross(e1);
  const double v = dir.dot(qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(qvec) * inv_det;
  if (t <= kMinHitDistance) return std::nullopt;
  return t;
}

Bvh::Bvh(const std::vector<Eigen::Vector3d>& vertices,
         const std::vector<std::array<int, 3>>& triangles) {
  const int n = static_cast<int>(triangles.size());
  if (n == 0) return;
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  std::vector<Aabb> boxes(n);
  std::vector<Eigen::Vector3d> centroids(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) boxes[i].extend(vertices[triangles[i][k]]);
    centroids[i] = (vertices[triangles[i][0]] + vertices[triangles[i][1]] + vertices[triangles[i][2]]) / 3.0;
  }
  nodes_.reserve(2 * n / kLeafSize + 1);

  struct Task {
    int node, first, count;
  };
  nodes_.push_back({});
  std::vector<Task> stack{{0, 0, n}};
  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    Aabb box;
    Aabb centroid_box;
    for (int i = task.first; i < task.first + task.count; ++i) {
      box.extend(boxes[order_[i]]);
      centroid_box.extend(centroids[order_[i]]);
    }
    nodes_[task.node].box = box;
    if (task.count <= kLeafSize) {
      nodes_[task.node].first = task.first;
      nodes_[task.node].count = task.count;
      continue;
    }
    int axis = 0;
    const Eigen::Vector3d extent = centroid_box.max - centroid_box.min;
    extent.maxCoeff(&axis);
    const int mid = task.first + task.count / 2;
    std::nth_element(order_.begin() + task.first, order_.begin() + mid,
                     order_.begin() + task.first + task.count, [&](int l, int r) {
                       if (centroids[l][axis] != centroids[r][axis]) return centroids[l][axis] < centroids[r][axis];
                       return l < r;
                     });
    const int left = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_.push_back({});
    nodes_[task.node].left = left;
    nodes_[task.node].right = left + 1;
    stack.push_back({left, task.first, mid - task.first});
    stack.push_back({left + 1, mid, task.first + task.count - mid});
  }
}

TriMesh::TriMesh(std::vector<Eigen::Vector3d> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)) {
  const int nv = static_cast<int>(vertices_.size());
  for (const auto& v : vertices_) {
    if (!v.allFinite()) throw InvalidArgument("TriMesh: non-finite vertex");
  }
  triangles_.reserve(triangles.size());
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) throw InvalidArgument("TriMesh: triangle index out of range");
    }
    const Eigen::Vector3d n = (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]);
    const double area = 0.5 * n.norm();
    if (!(area >= kDegenerateArea)) {
      ++dropped_;
      continue;
    }
    triangles_.push_back(t);
    face_normals_.push_back(n.normalized());
    face_areas_.push_back(area);
  }

  vertex_normals_.assign(nv, Eigen::Vector3d::Zero());
  vertex_pseudo_normals_.assign(nv, Eigen::Vector3d::Zero());
  std::unordered_map<std::uint64_t, int> edge_use;
  for (std::size_t f = 0; f < triangles_.size(); ++f) {
    const auto& t = triangles_[f];
    const Eigen::Vector3d& n = face_normals_[f];
    for (int k = 0; k < 3; ++k) {
      const int i = t[k];
      const int j = t[(k + 1) % 3];
      const int l = t[(k + 2) % 3];
      const Eigen::Vector3d e1 = (vertices_[j] - vertices_[i]).normalized();
      const Eigen::Vector3d e2 = (vertices_[l] - vertices_[i]).normalized();
      const double angle = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
      vertex_pseudo_normals_[i] += angle * n;
      vertex_normals_[i] += face_areas_[f] * n;
      const std::uint64_t key = edge_key(i, j);
      edge_pseudo_normals_.try_emplace(key, Eigen::Vector3d::Zero()).first->second += n;
      ++edge_use[key];
    }
  }
  for (auto& n : vertex_normals_) {
    if (n.squaredNorm() > 0.0) n.normalize();
  }
  watertight_ = !triangles_.empty();
  for (const auto& [key, count] : edge_use) {
    if (count != 2) {
      watertight_ = false;
      break;
    }
  }
  for (const auto& v : vertices_) bounds_.extend(v);
  bvh_ = Bvh(vertices_, triangles_);
}

std::uint64_t TriMesh::edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

Eigen::Vector3d TriMesh::edge_pseudo_normal(int a, int b) const {
  const auto it = edge_pseudo_normals_.find(edge_key(a, b));
  return it == edge_pseudo_normals_.end() ? Eigen::Vector3d::Zero() : it->second;
}

TriMesh TriMesh::transformed(const Eigen::Isometry3d& transform) const {
  std::vector<Eigen::Vector3d> v;
  v.reserve(vertices_.size());
  for (const auto& p : vertices_) v.push_back(transform * p);
  return TriMesh(std::move(v), triangles_);
}

TriMesh TriMesh::scaled(const Eigen::Vector3d& factors) const {
  std::vector<Eigen::Vector3d> v;
  v.reserve(vertices_.size());
  for (const auto& p : vertices_) v.push_back(p.cwiseProduct(factors));
  auto tris = triangles_;
  // A negative determinant mirrors the mesh; flip winding to keep normals outward.
  if (factors.prod() < 0.0) {
    for (auto& t : tris) std::swap(t[1], t[2]);
  }
  return TriMesh(std::move(v), std::move(tris));
}

TriMesh TriMesh::merge(const std::vector<TriMesh>& parts) {
  std::vector<Eigen::Vector3d> v;
  std::vector<std::array<int, 3>> t;
  for (const auto& part : parts) {
    const int offset = static_cast<int>(v.size());
    v.insert(v.end(), part.vertices().begin(), part.vertices().end());
    for (const auto& tri : part.triangles()) t.push_back({tri[0] + offset, tri[1] + offset, tri[2] + offset});
  }
  return TriMesh(std::move(v), std::move(t));
}

std::optional<RayHit> ray_intersect_first(const TriMesh& mesh, const Eigen::Vector3d& origin,
                                          const Eigen::Vector3d& dir) {
  const Bvh& bvh = mesh.bvh();
  if (bvh.empty()) return std::nullopt;
  const Eigen::Vector3d inv_dir = dir.cwiseInverse();
  double best_t = std::numeric_limits<double>::infinity();
  int best_tri = -1;
  const auto& nodes = bvh.nodes();
  const auto& order = bvh.order();
  const auto& verts = mesh.vertices();
  const auto& tris = mesh.triangles();

  std::vector<int> stack;
  stack.reserve(64);
  stack.push_back(0);
  while (!stack.empty()) {
    const auto& node = nodes[stack.back()];
    stack.pop_back();
    if (!ray_box(node.box, origin, inv_dir, best_t)) continue;
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int tri = order[i];
        const auto& t = tris[tri];
        const auto hit = intersect_triangle(origin, dir, verts[t[0]], verts[t[1]], verts[t[2]]);
        if (hit && (*hit < best_t || (*hit == best_t && tri < best_tri))) {
          best_t = *hit;
          best_tri = tri;
        }
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  if (best_tri < 0) return std::nullopt;
  return RayHit{origin + best_t * dir, best_tri, best_t};
}

ClosestPoint closest_point(const TriMesh& mesh, const Eigen::Vector3d& p) {
  const Bvh& bvh = mesh.bvh();
  if (bvh.empty()) throw InvalidArgument("closest_point: empty mesh");
  const auto& nodes = bvh.nodes();
  const auto& order = bvh.order();
  const auto& verts = mesh.vertices();
  const auto& tris = mesh.triangles();

  double best_d2 = std::numeric_limits<double>::infinity();
  ClosestPoint best;
  std::vector<int> stack;
  stack.reserve(64);
  stack.push_back(0);
  while (!stack.empty()) {
    const auto& node = nodes[stack.back()];
    stack.pop_back();
    if (node.box.squared_distance(p) > best_d2) continue;
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int tri = order[i];
        const auto& t = tris[tri];
        const TriangleClosest c = closest_on_triangle(p, verts[t[0]], verts[t[1]], verts[t[2]]);
        const double d2 = (c.point - p).squaredNorm();
        if (d2 < best_d2 || (d2 == best_d2 && tri < best.triangle_index)) {
          best_d2 = d2;
          best.point = c.point;
          best.triangle_index = tri;
          best.feature = c.feature;
          best.a = c.a >= 0 ? t[c.a] : -1;
          best.b = c.b >= 0 ? t[c.b] : -1;
        }
      }
      continue;
    }
    const auto& l = nodes[node.left];
    const auto& r = nodes[node.right];
    // Visit the nearer child first (pushed last).
    if (l.box.squared_distance(p) <= r.box.squared_distance(p)) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  best.distance = std::sqrt(best_d2);
  return best;
}

SignedDistance signed_distance(const TriMesh& mesh, const Eigen::Vector3d& p) {
  SignedDistance out;
  out.closest = closest_point(mesh, p);
  out.sign_reliable = mesh.watertight();
  Eigen::Vector3d normal;
  switch (out.closest.feature) {
    case Feature::kFace:
      normal = mesh.face_normals()[out.closest.triangle_index];
      break;
    case Feature::kEdge:
      normal = mesh.edge_pseudo_normal(out.closest.a, out.closest.b);
      break;
    case Feature::kVertex:
      normal = mesh.vertex_pseudo_normal(out.closest.a);
      break;
  }
  const double dist = out.closest.distance;
  const double side = (p - out.closest.point).dot(normal);
  out.value = side < 0.0 ? -dist : dist;
  return out;
}

}  // namespace ugcs::geom
