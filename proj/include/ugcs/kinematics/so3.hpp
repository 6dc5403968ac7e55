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

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ugcs::kin {

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

// Rotation from exponential coordinates (axis * angle).
Eigen::Matrix3d so3_exp(const Eigen::Vector3d& omega);

// Inverse of so3_exp with angle in [0, pi].
Eigen::Vector3d so3_log(const Eigen::Matrix3d& rotation);

// Left Jacobian: so3_exp(w + d) ~= so3_exp(J_l(w) d) * so3_exp(w).
Eigen::Matrix3d so3_left_jacobian(const Eigen::Vector3d& omega);

// Same rotation with |omega| <= pi.
Eigen::Vector3d wrap_rotation_vector(const Eigen::Vector3d& omega);

// Angle of R_a^T R_b in [0, pi].
double rotation_distance(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

// URDF fixed-axis roll/pitch/yaw: R = Rz(yaw) Ry(pitch) Rx(roll).
Eigen::Matrix3d rotation_from_rpy(const Eigen::Vector3d& rpy);

}  // namespace ugcs::kin
