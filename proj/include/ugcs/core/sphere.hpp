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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ugcs/kinematics/kinematics.hpp"
#include "ugcs/kinematics/model.hpp"

namespace ugcs {

struct Sphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // palm frame, meters
  double radius = 0.0;
};

// Fully open joint values: for each coordinate, the limit whose subtree
// geometry sits farther from the palm's approach axis.
Eigen::VectorXd open_joint_values(const kin::GripperModel& model);

// Sets of coordinates that close together (one per finger, merged when a
// coupling spans fingers).
std::vector<std::vector<int>> closing_groups(const kin::GripperModel& model);

struct SphereContact {
  int link = -1;
  Eigen::Vector3d point;   // palm frame
  Eigen::Vector3d normal;  // outward sphere normal at the contact
  double penetration = 0.0;
};

// Outcome of placing one sphere against the palm and closing the fingers.
struct SphereTrial {
  double radius = 0.0;
  bool graspable = false;
  std::string reason;  // empty when graspable
  Sphere sphere;
  Eigen::VectorXd joints;  // capture joint values
  double max_penetration = 0.0;
  std::vector<SphereContact> contacts;
};

struct SphereSearchOptions {
  double min_radius = 0.001;
  double max_radius = 0.5;
  double resolution = 0.0005;
  double max_penetration = 0.001;
  double antipodal_dot = -0.5;
  // Penetration allowed when inserting the sphere into the open gripper.
  double insertion_tolerance = 1e-6;
  // Gap below which a link counts as touching after closing.
  double contact_tolerance = 1e-5;
};

// Geometric graspability oracle for one radius. The sphere is placed on the
// approach axis tangent to the palm geometry, must fit the open gripper, and
// every closing group is bisected to first contact. Graspable iff the final
// penetration is within max_penetration and two contact normals oppose.
SphereTrial evaluate_sphere(const kin::GripperModel& model, double radius, const SphereSearchOptions& options = {});

struct SphereFit {
  Sphere sphere;
  // Capture grasp in the chart frame: sphere center at the origin and palm
  // axes aligned with the world axes.
  kin::GraspConfig capture_config;
  Eigen::VectorXd open_joints;
  SphereTrial trial;
};

// Binary search over the radius grid [min_radius, max_radius] with step
// `resolution`. Throws SphereFitFailure naming the gripper when the smallest
// radius is not graspable or the model has no actuated joint.
SphereFit max_graspable_sphere(const kin::GripperModel& model, const SphereSearchOptions& options = {});

// Grasp config that places the palm frame at `palm_pose` with the given joints.
kin::GraspConfig config_for_palm_pose(const kin::GripperModel& model, const Eigen::Isometry3d& palm_pose,
                                      const Eigen::VectorXd& joints);

}  // namespace ugcs
