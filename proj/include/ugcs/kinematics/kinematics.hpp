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

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "ugcs/kinematics/model.hpp"

namespace ugcs::kin {

// Gripper root pose plus actuated coordinate values. The pose is a
// translation in meters and a rotation in exponential coordinates.
struct GraspConfig {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d rotation = Eigen::Vector3d::Zero();
  Eigen::VectorXd joints;

  static GraspConfig zero(int num_coordinates);
  static GraspConfig from_pose(const Eigen::Isometry3d& root_pose, Eigen::VectorXd joints);
  // Layout [translation(3), rotation(3), joints(J)].
  static GraspConfig from_vector(const Eigen::VectorXd& x);

  Eigen::VectorXd to_vector() const;
  Eigen::Isometry3d root_pose() const;
  int dof() const { return 6 + static_cast<int>(joints.size()); }
  // Rotation vector re-wrapped to norm <= pi.
  GraspConfig canonical() const;
};

// World transforms of every link and of every joint frame (parent link
// transform composed with the joint origin, before joint motion).
struct KinematicState {
  std::vector<Eigen::Isometry3d> links;
  std::vector<Eigen::Isometry3d> joint_frames;
  Eigen::Isometry3d root_pose = Eigen::Isometry3d::Identity();
};

// Physical value of every joint (0 for fixed joints).
Eigen::VectorXd joint_values(const GripperModel& model, const Eigen::VectorXd& coordinates);

// Throws InvalidArgument when q does not match the model's coordinate count.
KinematicState forward_kinematics(const GripperModel& model, const GraspConfig& q);

std::map<std::string, Eigen::Isometry3d> link_transforms(const GripperModel& model, const GraspConfig& q);

// A point rigidly attached to a link, in that link's frame.
struct LinkPoint {
  int link = -1;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

struct PosedPoints {
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3d> normals;
  std::vector<int> links;  // source link per point; local index = position in input
};

// Throws InvalidArgument on an unknown link index.
PosedPoints pose_points(const GripperModel& model, const GraspConfig& q, const std::vector<LinkPoint>& points);
PosedPoints pose_points(const GripperModel& model, const KinematicState& state,
                        const std::vector<LinkPoint>& points);

// d(world point)/d(config), 3 x (6 + J), columns [translation, rotation, joints].
Eigen::Matrix<double, 3, Eigen::Dynamic> point_jacobian(const GripperModel& model, const GraspConfig& q,
                                                        int link, const Eigen::Vector3d& local);
Eigen::Matrix<double, 3, Eigen::Dynamic> point_jacobian(const GripperModel& model, const GraspConfig& q,
                                                        const KinematicState& state, int link,
                                                        const Eigen::Vector3d& world);

// Sum over points of J_i^T g_i, where g_i = dE/d(world point i). Linear in
// the number of points; equivalent to stacking point_jacobian.
Eigen::VectorXd pullback_point_gradients(const GripperModel& model, const GraspConfig& q,
                                         const KinematicState& state, const std::vector<int>& links,
                                         const std::vector<Eigen::Vector3d>& world_points,
                                         const std::vector<Eigen::Vector3d>& gradients);

// Coordinates clamped into [lower, upper].
Eigen::VectorXd clamp_to_limits(const GripperModel& model, const Eigen::VectorXd& coordinates);

}  // namespace ugcs::kin
