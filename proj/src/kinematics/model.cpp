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

#include "ugcs/kinematics/model.hpp"

#include <algorithm>
#include <set>

#include "ugcs/common/error.hpp"

namespace ugcs::kin {

GripperModel::GripperModel(std::string name, std::vector<Link> links, std::vector<Joint> joints, int palm)
    : name_(std::move(name)), links_(std::move(links)), joints_(std::move(joints)), palm_(palm) {
  const int nl = static_cast<int>(links_.size());
  const int nj = static_cast<int>(joints_.size());
  if (nl == 0) throw ParseError("gripper '" + name_ + "': no links");
  {
    std::set<std::string> seen;
    for (const auto& l : links_) {
      if (!seen.insert(l.name).second) throw ParseError("link '" + l.name + "': duplicate name");
    }
    seen.clear();
    for (const auto& j : joints_) {
      if (!seen.insert(j.name).second) throw ParseError("joint '" + j.name + "': duplicate name");
    }
  }

  parent_joint_.assign(nl, -1);
  for (int j = 0; j < nj; ++j) {
    const Joint& joint = joints_[j];
    if (joint.parent < 0 || joint.parent >= nl || joint.child < 0 || joint.child >= nl) {
      throw ParseError("joint '" + joint.name + "': unknown link reference");
    }
    if (joint.parent == joint.child) {
      throw ParseError("joint '" + joint.name + "': self-loop on link '" + links_[joint.child].name + "'");
    }
    if (parent_joint_[joint.child] >= 0) {
      throw ParseError("joint '" + joint.name + "': link '" + links_[joint.child].name +
                       "' has more than one parent");
    }
    parent_joint_[joint.child] = j;
    if (joint.type != JointType::kFixed) {
      if (!(joint.lower <= joint.upper)) {
        throw ParseError("joint '" + joint.name + "': lower limit exceeds upper limit");
      }
      if (!(joint.axis.norm() > 0.0)) throw ParseError("joint '" + joint.name + "': zero axis");
      joints_[j].axis.normalize();
    }
  }

  std::vector<int> roots;
  for (int l = 0; l < nl; ++l) {
    if (parent_joint_[l] < 0) roots.push_back(l);
  }
  if (roots.size() != 1) {
    // With one parent per link, a forest with no root means a cycle.
    if (roots.empty()) throw ParseError("gripper '" + name_ + "': cycle in joint graph");
    throw ParseError("gripper '" + name_ + "': multiple root links ('" + links_[roots[0]].name + "', '" +
                     links_[roots[1]].name + "')");
  }
  root_ = roots.front();

  // Breadth-first from the root; links never reached sit on a cycle.
  std::vector<std::vector<int>> child_joints(nl);
  for (int j = 0; j < nj; ++j) child_joints[joints_[j].parent].push_back(j);
  std::vector<int> frontier{root_};
  std::vector<bool> reached(nl, false);
  reached[root_] = true;
  moving_ancestors_.assign(nl, {});
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const int link = frontier[head];
    for (int j : child_joints[link]) {
      const int child = joints_[j].child;
      reached[child] = true;
      joint_order_.push_back(j);
      moving_ancestors_[child] = moving_ancestors_[link];
      if (joints_[j].type != JointType::kFixed) moving_ancestors_[child].push_back(j);
      frontier.push_back(child);
    }
  }
  for (int l = 0; l < nl; ++l) {
    if (!reached[l]) throw ParseError("link '" + links_[l].name + "': cycle in joint graph");
  }

  if (palm_ < 0 || palm_ >= nl) throw ParseError("gripper '" + name_ + "': palm link not found");

  // Independently actuated joints get coordinates in declaration order.
  for (int j = 0; j < nj; ++j) {
    Joint& joint = joints_[j];
    if (joint.type == JointType::kFixed || joint.mimic >= 0) continue;
    joint.coordinate = static_cast<int>(coordinates_.size());
    joint.coordinate_gain = 1.0;
    joint.coordinate_offset = 0.0;
    coordinates_.push_back({joint.name, j, joint.lower, joint.upper});
  }
  for (int j = 0; j < nj; ++j) {
    Joint& joint = joints_[j];
    if (joint.type == JointType::kFixed || joint.mimic < 0) continue;
    double gain = 1.0;
    double offset = 0.0;
    int cur = j;
    std::set<int> visited;
    while (joints_[cur].mimic >= 0) {
      if (!visited.insert(cur).second) throw ParseError("joint '" + joint.name + "': mimic cycle");
      const Joint& step = joints_[cur];
      if (step.mimic >= nj) throw ParseError("joint '" + step.name + "': unknown mimic joint");
      offset = gain * step.offset + offset;
      gain *= step.multiplier;
      cur = step.mimic;
    }
    if (joints_[cur].type == JointType::kFixed) {
      throw ParseError("joint '" + joint.name + "': mimics a fixed joint");
    }
    joint.coordinate = joints_[cur].coordinate;
    joint.coordinate_gain = gain;
    joint.coordinate_offset = offset;
  }
}

std::optional<int> GripperModel::link_index(const std::string& name) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (links_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> GripperModel::coordinate_index(const std::string& name) const {
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    if (coordinates_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int GripperModel::require_link(const std::string& name) const {
  const auto idx = link_index(name);
  if (!idx) throw InvalidArgument("gripper '" + name_ + "': unknown link '" + name + "'");
  return *idx;
}

}  // namespace ugcs::kin
