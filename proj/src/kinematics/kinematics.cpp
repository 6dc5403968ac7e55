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

#include "ugcs/kinematics/kinematics.hpp"

#include <algorithm>

#include "ugcs/common/error.hpp"
#include "ugcs/kinematics/so3.hpp"

namespace ugcs::kin {
namespace {

void check_dims(const GripperModel& model, const GraspConfig& q) {
  if (q.joints.size() != model.num_coordinates()) {
    throw InvalidArgument("gripper '" + model.name() + "': expected " + std::to_string(model.num_coordinates()) +
                          " joint values, got " + std::to_string(q.joints.size()));
  }
}

Eigen::Isometry3d joint_motion(const Joint& joint, double value) {
  Eigen::Isometry3d m = Eigen::Isometry3d::Identity();
  switch (joint.type) {
    case JointType::kRevolute:
      m.linear() = Eigen::AngleAxisd(value, joint.axis).toRotationMatrix();
      break;
    case JointType::kPrismatic:
      m.translation() = value * joint.axis;
      break;
    case JointType::kFixed:
      break;
  }
  return m;
}

}  // namespace

GraspConfig GraspConfig::zero(int num_coordinates) {
  GraspConfig q;
  q.joints = Eigen::VectorXd::Zero(num_coordinates);
  return q;
}

GraspConfig GraspConfig::from_pose(const Eigen::Isometry3d& root_pose, Eigen::VectorXd joints) {
  GraspConfig q;
  q.translation = root_pose.translation();
  q.rotation = so3_log(root_pose.linear());
  q.joints = std::move(joints);
  return q;
}

GraspConfig GraspConfig::from_vector(const Eigen::VectorXd& x) {
  if (x.size() < 6) throw InvalidArgument("GraspConfig::from_vector: need at least 6 values");
  GraspConfig q;
  q.translation = x.head<3>();
  q.rotation = x.segment<3>(3);
  q.joints = x.tail(x.size() - 6);
  return q;
}

Eigen::VectorXd GraspConfig::to_vector() const {
  Eigen::VectorXd x(dof());
  x << translation, rotation, joints;
  return x;
}

Eigen::Isometry3d GraspConfig::root_pose() const {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = so3_exp(rotation);
  t.translation() = translation;
  return t;
}

GraspConfig GraspConfig::canonical() const {
  GraspConfig q = *this;
  q.rotation = wrap_rotation_vector(rotation);
  return q;
}

Eigen::VectorXd joint_values(const GripperModel& model, const Eigen::VectorXd& coordinates) {
  const auto& joints = model.joints();
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(joints.size()));
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const Joint& joint = joints[j];
    if (joint.coordinate < 0) continue;
    values[static_cast<Eigen::Index>(j)] =
        joint.coordinate_gain * coordinates[joint.coordinate] + joint.coordinate_offset;
  }
  return values;
}

KinematicState forward_kinematics(const GripperModel& model, const GraspConfig& q) {
  check_dims(model, q);
  const auto& joints = model.joints();
  const Eigen::VectorXd values = joint_values(model, q.joints);
  KinematicState state;
  state.root_pose = q.root_pose();
  state.links.assign(model.links().size(), Eigen::Isometry3d::Identity());
  state.joint_frames.assign(joints.size(), Eigen::Isometry3d::Identity());
  state.links[model.root()] = state.root_pose;
  for (int j : model.joint_order()) {
    const Joint& joint = joints[j];
    state.joint_frames[j] = state.links[joint.parent] * joint.origin;
    state.links[joint.child] = state.joint_frames[j] * joint_motion(joint, values[j]);
  }
  return state;
}

std::map<std::string, Eigen::Isometry3d> link_transforms(const GripperModel& model, const GraspConfig& q) {
  const KinematicState state = forward_kinematics(model, q);
  std::map<std::string, Eigen::Isometry3d> out;
  for (std::size_t l = 0; l < model.links().size(); ++l) out.emplace(model.links()[l].name, state.links[l]);
  return out;
}

PosedPoints pose_points(const GripperModel& model, const GraspConfig& q, const std::vector<LinkPoint>& points) {
  return pose_points(model, forward_kinematics(model, q), points);
}

PosedPoints pose_points(const GripperModel& model, const KinematicState& state,
                        const std::vector<LinkPoint>& points) {
  PosedPoints out;
  out.positions.reserve(points.size());
  out.normals.reserve(points.size());
  out.links.reserve(points.size());
  const int nl = static_cast<int>(model.links().size());
  for (const auto& p : points) {
    if (p.link < 0 || p.link >= nl) throw InvalidArgument("pose_points: unknown link index");
    const Eigen::Isometry3d& t = state.links[p.link];
    out.positions.push_back(t * p.position);
    out.normals.push_back((t.linear() * p.normal).normalized());
    out.links.push_back(p.link);
  }
  return out;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> point_jacobian(const GripperModel& model, const GraspConfig& q,
                                                        int link, const Eigen::Vector3d& local) {
  if (link < 0 || link >= static_cast<int>(model.links().size())) {
    throw InvalidArgument("point_jacobian: unknown link index");
  }
  const KinematicState state = forward_kinematics(model, q);
  return point_jacobian(model, q, state, link, state.links[link] * local);
}

Eigen::Matrix<double, 3, Eigen::Dynamic> point_jacobian(const GripperModel& model, const GraspConfig& q,
                                                        const KinematicState& state, int link,
                                                        const Eigen::Vector3d& world) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> jac = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, q.dof());
  jac.leftCols<3>().setIdentity();
  jac.middleCols<3>(3) = -skew(world - q.translation) * so3_left_jacobian(q.rotation);
  for (int j : model.moving_ancestors(link)) {
    const Joint& joint = model.joints()[j];
    const Eigen::Isometry3d& frame = state.joint_frames[j];
    const Eigen::Vector3d axis = frame.linear() * joint.axis;
    const Eigen::Vector3d column = joint.type == JointType::kRevolute
                                       ? Eigen::Vector3d(axis.cross(world - frame.translation()))
                                       : axis;
    jac.col(6 + joint.coordinate) += joint.coordinate_gain * column;
  }
  return jac;
}

Eigen::VectorXd pullback_point_gradients(const GripperModel& model, const GraspConfig& q,
                                         const KinematicState& state, const std::vector<int>& links,
                                         const std::vector<Eigen::Vector3d>& world_points,
                                         const std::vector<Eigen::Vector3d>& gradients) {
  const std::size_t nl = model.links().size();
  // Per-link sums of g and p x g; joint columns only need these subtree sums.
  std::vector<Eigen::Vector3d> sum_g(nl, Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> sum_pxg(nl, Eigen::Vector3d::Zero());
  for (std::size_t i = 0; i < world_points.size(); ++i) {
    sum_g[links[i]] += gradients[i];
    sum_pxg[links[i]] += world_points[i].cross(gradients[i]);
  }
  const auto& joints = model.joints();
  const auto& order = model.joint_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Joint& joint = joints[*it];
    sum_g[joint.parent] += sum_g[joint.child];
    sum_pxg[joint.parent] += sum_pxg[joint.child];
  }
  // After accumulation the root holds totals; child sums still hold subtrees.
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(q.dof());
  const Eigen::Vector3d total_g = sum_g[model.root()];
  const Eigen::Vector3d total_pxg = sum_pxg[model.root()];
  grad.head<3>() = total_g;
  // sum (p - t) x g = sum p x g - t x sum g.
  grad.segment<3>(3) = so3_left_jacobian(q.rotation).transpose() * (total_pxg - q.translation.cross(total_g));
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const Joint& joint = joints[j];
    if (joint.coordinate < 0) continue;
    const Eigen::Isometry3d& frame = state.joint_frames[j];
    const Eigen::Vector3d axis = frame.linear() * joint.axis;
    double d = 0.0;
    if (joint.type == JointType::kRevolute) {
      // sum axis . ((p - o) x g) = axis . (sum p x g - o x sum g)
      d = axis.dot(sum_pxg[joint.child] - frame.translation().cross(sum_g[joint.child]));
    } else {
      d = axis.dot(sum_g[joint.child]);
    }
    grad[6 + joint.coordinate] += joint.coordinate_gain * d;
  }
  return grad;
}

Eigen::VectorXd clamp_to_limits(const GripperModel& model, const Eigen::VectorXd& coordinates) {
  Eigen::VectorXd out = coordinates;
  for (int c = 0; c < model.num_coordinates(); ++c) {
    out[c] = std::clamp(out[c], model.coordinates()[c].lower, model.coordinates()[c].upper);
  }
  return out;
}

}  // namespace ugcs::kin
