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

#include "ugcs/geom/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ugcs/common/error.hpp"

namespace ugcs::geom {

TriMesh make_box(const Eigen::Vector3d& min, const Eigen::Vector3d& max) {
  std::vector<Eigen::Vector3d> v;
  for (int i = 0; i < 8; ++i) {
    v.emplace_back((i & 1) ? max.x() : min.x(), (i & 2) ? max.y() : min.y(), (i & 4) ? max.z() : min.z());
  }
  std::vector<std::array<int, 3>> t = {
      {0, 2, 1}, {1, 2, 3},  // -z
      {4, 5, 6}, {5, 7, 6},  // +z
      {0, 1, 4}, {1, 5, 4},  // -y
      {2, 6, 3}, {3, 6, 7},  // +y
      {0, 4, 2}, {2, 4, 6},  // -x
      {1, 3, 5}, {3, 7, 5},  // +x
  };
  return TriMesh(std::move(v), std::move(t));
}

TriMesh make_icosphere(double radius, int subdivisions, const Eigen::Vector3d& center) {
  if (radius <= 0.0 || subdivisions < 0) throw InvalidArgument("make_icosphere: bad parameters");
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {
      {-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
      {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1},
  };
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> t = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
  };
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(t.size() * 4);
    for (const auto& tri : t) {
      const int ab = midpoint(tri[0], tri[1]);
      const int bc = midpoint(tri[1], tri[2]);
      const int ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    t = std::move(next);
  }
  for (auto& p : v) p = center + radius * p;
  return TriMesh(std::move(v), std::move(t));
}

SurfaceSamples sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed) {
  if (mesh.empty()) throw InvalidArgument("sample_surface: empty mesh");
  std::vector<double> cumulative(mesh.face_areas().size());
  double total = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    total += mesh.face_areas()[i];
    cumulative[i] = total;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SurfaceSamples out;
  out.points.reserve(count);
  out.normals.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto f = static_cast<std::size_t>(it - cumulative.begin());
    double a = unit(rng);
    double b = unit(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    const auto& tri = mesh.triangles()[f];
    const auto& v = mesh.vertices();
    out.points.push_back(v[tri[0]] + a * (v[tri[1]] - v[tri[0]]) + b * (v[tri[2]] - v[tri[0]]));
    out.normals.push_back(mesh.face_normals()[f]);
  }
  return out;
}

}  // namespace ugcs::geom
