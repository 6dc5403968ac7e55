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

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ugcs/geom/mesh.hpp"

namespace ugcs::geom {

// Closed, outward-wound box spanning [min, max].
TriMesh make_box(const Eigen::Vector3d& min, const Eigen::Vector3d& max);

// Icosahedron subdivided `subdivisions` times, vertices projected onto the
// sphere of the given radius around `center`.
TriMesh make_icosphere(double radius, int subdivisions,
                       const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

struct SurfaceSamples {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> normals;  // face normal of the sampled triangle
};

// Area-weighted uniform samples; deterministic for a given seed.
SurfaceSamples sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed);

}  // namespace ugcs::geom
