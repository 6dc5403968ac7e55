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

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ugcs/core/object_map.hpp"
#include "ugcs/core/print.hpp"
#include "ugcs/core/sphere.hpp"
#include "ugcs/geom/mesh.hpp"
#include "ugcs/kinematics/kinematics.hpp"
#include "ugcs/kinematics/model.hpp"

namespace ugcs::testing {

std::filesystem::path asset(const std::string& name);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

// Model, maximal sphere and print of one bundled gripper, built once per
// process and shared between tests.
struct GripperBundle {
  std::string file;
  kin::GripperModel model;
  SphereFit fit;
  GripperPrint print;
};

const GripperBundle& bundle(const std::string& gripper, std::size_t rays = 5000);

// The gripper's own maximal sphere as the object, in the chart frame, with the
// ground-truth map of the capture grasp.
struct SelfSphere {
  geom::TriMesh mesh;
  ObjectCloud cloud;
  CoordinateMap map;
};

const SelfSphere& self_sphere(const std::string& gripper, int subdivisions = 4);

// Geodesic angle between the root rotations of two grasps.
double rotation_error(const kin::GraspConfig& a, const kin::GraspConfig& b);

// Root within 0.2 m and 2 rad of the origin, joints uniform within limits.
kin::GraspConfig random_grasp(const kin::GripperModel& model, std::mt19937_64& rng);

// Sphere cloud with a palm patch around the south pole at phi 0.95.
struct PatchScene {
  ugcs::ObjectCloud cloud;
  ugcs::CoordinateMap map;
  std::vector<int> patch;
};

PatchScene south_patch_scene();

}  // namespace ugcs::testing
