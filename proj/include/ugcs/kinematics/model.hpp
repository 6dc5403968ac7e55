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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "ugcs/geom/mesh.hpp"

namespace ugcs::kin {

enum class JointType { kRevolute, kPrismatic, kFixed };

struct Link {
  std::string name;
  std::optional<geom::TriMesh> mesh;  // link frame, meters
};

struct Joint {
  std::string name;
  JointType type = JointType::kFixed;
  int parent = -1;  // link indices
  int child = -1;
  Eigen::Isometry3d origin = Eigen::Isometry3d::Identity();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  double lower = 0.0;
  double upper = 0.0;
  // Mimic coupling: value = multiplier * value(mimic) + offset. -1 when the
  // joint is independently actuated.
  int mimic = -1;
  double multiplier = 1.0;
  double offset = 0.0;
  // Filled by GripperModel: value = coordinate_gain * q[coordinate] +
  // coordinate_offset, coordinate -1 for fixed joints.
  int coordinate = -1;
  double coordinate_gain = 1.0;
  double coordinate_offset = 0.0;
};

// One actuated degree of freedom of the optimization vector.
struct Coordinate {
  std::string name;
  int joint = -1;  // the driving (non-mimic) joint
  double lower = 0.0;
  double upper = 0.0;
};

// Kinematic tree of a gripper. Immutable once constructed; the constructor
// validates the tree (single root, no cycles, limits ordered).
class GripperModel {
 public:
  GripperModel(std::string name, std::vector<Link> links, std::vector<Joint> joints, int palm);

  const std::string& name() const { return name_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<Joint>& joints() const { return joints_; }
  const std::vector<Coordinate>& coordinates() const { return coordinates_; }
  int num_coordinates() const { return static_cast<int>(coordinates_.size()); }
  int root() const { return root_; }
  int palm() const { return palm_; }

  std::optional<int> link_index(const std::string& name) const;
  std::optional<int> coordinate_index(const std::string& name) const;
  // Throws InvalidArgument when the link does not exist.
  int require_link(const std::string& name) const;

  // Joints in parent-before-child order.
  const std::vector<int>& joint_order() const { return joint_order_; }
  // Joint whose child is `link`; -1 for the root.
  int parent_joint(int link) const { return parent_joint_[link]; }
  // Non-fixed joints between the root and `link`, root first.
  const std::vector<int>& moving_ancestors(int link) const { return moving_ancestors_[link]; }

 private:
  std::string name_;
  std::vector<Link> links_;
  std::vector<Joint> joints_;
  std::vector<Coordinate> coordinates_;
  int root_ = -1;
  int palm_ = -1;
  std::vector<int> joint_order_;
  std::vector<int> parent_joint_;
  std::vector<std::vector<int>> moving_ancestors_;
};

// Parses the URDF subset: <link> with visual/collision mesh geometry,
// revolute/prismatic/fixed <joint> with origin, axis, limit and optional
// mimic, plus exactly one <ugcs palm_link="..."/> element. Mesh paths resolve
// against `base_dir`. Throws ParseError naming the offending element.
GripperModel parse_gripper(const std::string& text, const std::filesystem::path& base_dir);

// Reads and parses a description file. Throws ParseError if unreadable.
GripperModel load_gripper(const std::filesystem::path& path);

}  // namespace ugcs::kin
