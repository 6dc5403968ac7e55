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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ugcs/core/print.hpp"
#include "ugcs/geom/mesh.hpp"
#include "ugcs/geom/spherical.hpp"
#include "ugcs/kinematics/kinematics.hpp"

namespace ugcs {

struct ObjectCloud {
  std::string object_id;
  std::vector<Eigen::Vector3d> points;   // object frame, meters
  std::vector<Eigen::Vector3d> normals;  // outward, unit
  std::string source;                    // mesh path, may be empty

  std::size_t size() const { return points.size(); }
  // Throws InvalidArgument on an empty cloud, size mismatch or non-unit normals.
  void validate() const;
};

ObjectCloud sample_object(const geom::TriMesh& mesh, std::size_t count, std::uint64_t seed,
                          std::string object_id, std::string source = {});

struct CoordinateMap {
  std::vector<geom::SphericalCoord> coords;
  std::vector<bool> contact;

  std::size_t size() const { return coords.size(); }
  std::size_t contact_count() const;
  void validate(std::size_t expected_size) const;
};

struct ObjectMapOptions {
  double contact_threshold = 0.01;  // meters, inclusive
  std::size_t threads = 1;
};

CoordinateMap object_map_from_grasp(const GripperPrint& print, const kin::GraspConfig& grasp,
                                    const kin::GripperModel& model, const ObjectCloud& object,
                                    const ObjectMapOptions& options = {});

struct GraspRecord {
  std::string gripper_id;
  std::string object_id;
  kin::GraspConfig config;
};

}  // namespace ugcs
