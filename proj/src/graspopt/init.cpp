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

#include <cmath>
#include <optional>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "ugcs/common/error.hpp"
#include "ugcs/graspopt/graspopt.hpp"
#include "ugcs/kinematics/so3.hpp"

namespace ugcs::opt {
namespace {

// World axis least aligned with `n`, projected onto the plane normal to `n`.
Eigen::Vector3d reference_tangent(const Eigen::Vector3d& n) {
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(n[k]) < std::abs(n[axis])) axis = k;
  }
  const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
  return (e - e.dot(n) * n).normalized();
}

// Unit principal direction of `points` within the plane normal to `n`.
// Sign is fixed by a positive dot product with `reference`.
Eigen::Vector3d principal_tangent(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& n,
                                  const Eigen::Vector3d& reference) {
  if (points.size() < 2) return reference;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    Eigen::Vector3d d = p - mean;
    d -= d.dot(n) * n;
    cov += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  if (!(eig.eigenvalues()[2] > 1e-18)) return reference;
  Eigen::Vector3d axis = eig.eigenvectors().col(2);
  axis = (axis - axis.dot(n) * n).normalized();
  return axis.dot(reference) < 0.0 ? Eigen::Vector3d(-axis) : axis;
}

// Angle of the planar rotation taking the patch's chart directions (palm xy)
// onto its positions in the tangent basis (t1, t2), by 2D Procrustes.
std::optional<double> chart_spin(const CoordinateMap& map, const ObjectCloud& object, const std::vector<int>& patch,
                                 const Eigen::Vector3d& mean, const Eigen::Vector3d& t1, const Eigen::Vector3d& t2) {
  if (patch.size() < 2) return std::nullopt;
  Eigen::Vector2d chart_mean = Eigen::Vector2d::Zero();
  for (int i : patch) chart_mean += geom::unit_from_spherical(map.coords[i]).head<2>();
  chart_mean /= static_cast<double>(patch.size());
  double dot = 0.0;
  double cross = 0.0;
  for (int i : patch) {
    const Eigen::Vector2d u = geom::unit_from_spherical(map.coords[i]).head<2>() - chart_mean;
    const Eigen::Vector3d d = object.points[i] - mean;
    const Eigen::Vector2d w(d.dot(t1), d.dot(t2));
    dot += u.dot(w);
    cross += u.x() * w.y() - u.y() * w.x();
  }
  if (!(std::hypot(dot, cross) > 1e-15)) return std::nullopt;
  return std::atan2(cross, dot);
}

}  // namespace

InitPose init_pose(const CoordinateMap& map, const ObjectCloud& object, const GripperPrint& print,
                   const OptimizationConfig& cfg) {
  if (map.size() != object.size()) throw InvalidArgument("init_pose: map and object cloud differ in size");
  InitPose init;
  int best_phi = -1;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.contact[i]) continue;
    const auto& c = map.coords[i];
    if (c.lambda <= cfg.lambda_ub && c.phi >= cfg.phi_lb) init.support.push_back(static_cast<int>(i));
    if (best_phi < 0 || c.phi > map.coords[best_phi].phi) best_phi = static_cast<int>(i);
  }
  if (best_phi < 0) throw Uninitializable("uninitializable map: no contact points");
  if (init.support.empty()) {
    init.support.push_back(best_phi);
    init.fallback = true;
  }

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> patch;
  for (int i : init.support) {
    mean += object.points[i];
    normal += object.normals[i];
    patch.push_back(object.points[i]);
  }
  mean /= static_cast<double>(init.support.size());
  if (!(normal.norm() > 1e-12)) throw Uninitializable("uninitializable map: palm patch normals cancel out");
  normal.normalize();

  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d t1 = reference_tangent(normal);
  const Eigen::Vector3d t2 = normal.cross(t1);
  Eigen::Matrix3d world;
  world << t1, t2, normal;
  Eigen::Matrix3d palm = Eigen::Matrix3d::Identity();
  if (const auto spin = chart_spin(map, object, init.support, mean, t1, t2)) {
    palm.topLeftCorner<2, 2>() = Eigen::Rotation2Dd(-*spin).toRotationMatrix();
  } else {
    const Eigen::Vector3d object_axis = principal_tangent(patch, normal, t1);
    std::vector<Eigen::Vector3d> print_points(print.points().begin(), print.points().end());
    const Eigen::Vector3d print_axis = principal_tangent(print_points, z, Eigen::Vector3d::UnitX());
    world << object_axis, normal.cross(object_axis), normal;
    palm << print_axis, z.cross(print_axis), z;
  }
  Eigen::Matrix3d rotation = world * palm.transpose();
  Eigen::Vector3d position = mean + cfg.standoff * normal;

  if (cfg.init_jitter_translation > 0.0 || cfg.init_jitter_rotation > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector3d dt;
    Eigen::Vector3d dr;
    for (int k = 0; k < 3; ++k) dt[k] = gauss(rng);
    for (int k = 0; k < 3; ++k) dr[k] = gauss(rng);
    position += cfg.init_jitter_translation * dt;
    rotation = kin::so3_exp(cfg.init_jitter_rotation * dr) * rotation;
  }
  init.palm_pose.linear() = rotation;
  init.palm_pose.translation() = position;
  return init;
}

}  // namespace ugcs::opt
