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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ugcs/core/sphere.hpp"
#include "ugcs/geom/spherical.hpp"
#include "ugcs/kinematics/kinematics.hpp"
#include "ugcs/kinematics/model.hpp"

namespace ugcs {

// Gripper surface points seen from the inside of the captured sphere, each
// tagged with the spherical coordinate of the ray that found it.
class GripperPrint {
 public:
  struct Data {
    std::string gripper_id;
    std::string gripper_source;  // description path, may be empty
    Sphere sphere;
    kin::GraspConfig print_config;
    std::vector<Eigen::Vector3d> points;   // palm frame
    std::vector<geom::SphericalCoord> coords;
    std::vector<std::string> links;        // hit link per point
    std::vector<Eigen::Vector3d> normals;  // palm frame, outward from the link
  };

  // Validates sizes, M > 0 and the absence of the no-contact coordinate.
  explicit GripperPrint(Data data);

  const std::string& gripper_id() const { return data_.gripper_id; }
  const std::string& gripper_source() const { return data_.gripper_source; }
  const Sphere& sphere() const { return data_.sphere; }
  const kin::GraspConfig& print_config() const { return data_.print_config; }
  const std::vector<Eigen::Vector3d>& points() const { return data_.points; }
  const std::vector<geom::SphericalCoord>& coords() const { return data_.coords; }
  const std::vector<std::string>& links() const { return data_.links; }
  const std::vector<Eigen::Vector3d>& normals() const { return data_.normals; }
  std::size_t size() const { return data_.points.size(); }
  const Data& data() const { return data_; }

 private:
  Data data_;
};

struct PrintOptions {
  std::size_t threads = 1;
  std::string gripper_source;
};

// `capture_config` poses the gripper; ray directions are taken in the palm
// frame. Throws EmptyPrint when no ray hits the gripper.
GripperPrint build_print(const kin::GripperModel& model, const Sphere& sphere, const kin::GraspConfig& capture_config,
                         std::size_t ray_count, const PrintOptions& options = {});

GripperPrint build_print(const kin::GripperModel& model, const Sphere& sphere, const kin::GraspConfig& capture_config,
                         const std::vector<Eigen::Vector3d>& directions, const PrintOptions& options = {});

// Print points expressed in their link frames, ready for pose_points.
std::vector<kin::LinkPoint> print_link_points(const GripperPrint& print, const kin::GripperModel& model);

}  // namespace ugcs
