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

#include "ugcs/core/print.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "ugcs/common/error.hpp"
#include "ugcs/common/parallel.hpp"

namespace ugcs {

GripperPrint::GripperPrint(Data data) : data_(std::move(data)) {
  const std::size_t m = data_.points.size();
  if (m == 0) throw EmptyPrint("gripper print '" + data_.gripper_id + "' is empty");
  if (data_.coords.size() != m || data_.links.size() != m || data_.normals.size() != m) {
    throw InvalidArgument("gripper print: points, coords, links and normals differ in length");
  }
  for (const auto& c : data_.coords) {
    if (c == geom::kNoContactCoord) throw InvalidArgument("gripper print: coordinate equals the no-contact pole");
  }
  if (!(data_.sphere.radius > 0.0)) throw InvalidArgument("gripper print: sphere radius must be positive");
}

GripperPrint build_print(const kin::GripperModel& model, const Sphere& sphere, const kin::GraspConfig& capture_config,
                         std::size_t ray_count, const PrintOptions& options) {
  if (ray_count < 1000) throw InvalidArgument("build_print: ray count must be at least 1000");
  return build_print(model, sphere, capture_config, geom::fibonacci_directions(ray_count), options);
}

GripperPrint build_print(const kin::GripperModel& model, const Sphere& sphere, const kin::GraspConfig& capture_config,
                         const std::vector<Eigen::Vector3d>& directions, const PrintOptions& options) {
  const kin::KinematicState state = kin::forward_kinematics(model, capture_config);
  const Eigen::Isometry3d palm = state.links[model.palm()];
  const Eigen::Vector3d origin = palm * sphere.center;
  const std::size_t nl = model.links().size();
  std::vector<Eigen::Isometry3d> link_inv(nl);
  for (std::size_t l = 0; l < nl; ++l) link_inv[l] = state.links[l].inverse();

  struct Hit {
    int link = -1;
    Eigen::Vector3d point;
    Eigen::Vector3d normal;
  };
  std::vector<Hit> hits(directions.size());
  parallel_for(directions.size(), options.threads, [&](std::size_t i) {
    const Eigen::Vector3d dir = palm.linear() * directions[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& mesh = model.links()[l].mesh;
      if (!mesh || mesh->empty()) continue;
      const Eigen::Vector3d local_origin = link_inv[l] * origin;
      const Eigen::Vector3d local_dir = link_inv[l].linear() * dir;
      const auto hit = geom::ray_intersect_first(*mesh, local_origin, local_dir);
      if (hit && hit->distance < best) {
        best = hit->distance;
        hits[i].link = static_cast<int>(l);
        hits[i].point = state.links[l] * hit->point;
        hits[i].normal = state.links[l].linear() * mesh->face_normals()[hit->triangle_index];
      }
    }
  });

  GripperPrint::Data data;
  data.gripper_id = model.name();
  data.gripper_source = options.gripper_source;
  data.sphere = sphere;
  data.print_config = capture_config;
  const Eigen::Isometry3d palm_inv = palm.inverse();
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (hits[i].link < 0) continue;
    const geom::SphericalCoord coord = geom::spherical_from_unit(directions[i]);
    if (coord == geom::kNoContactCoord) continue;
    data.points.push_back(palm_inv * hits[i].point);
    data.coords.push_back(coord);
    data.links.push_back(model.links()[hits[i].link].name);
    data.normals.push_back((palm_inv.linear() * hits[i].normal).normalized());
  }
  if (data.points.empty()) throw EmptyPrint("gripper '" + model.name() + "': empty print (no ray hit the gripper)");
  return GripperPrint(std::move(data));
}

std::vector<kin::LinkPoint> print_link_points(const GripperPrint& print, const kin::GripperModel& model) {
  const kin::KinematicState state = kin::forward_kinematics(model, print.print_config());
  const Eigen::Isometry3d palm = state.links[model.palm()];
  std::vector<kin::LinkPoint> out;
  out.reserve(print.size());
  for (std::size_t i = 0; i < print.size(); ++i) {
    const auto link = model.link_index(print.links()[i]);
    if (!link) throw InvalidArgument("gripper print references unknown link '" + print.links()[i] + "'");
    const Eigen::Isometry3d link_from_palm = state.links[*link].inverse() * palm;
    out.push_back({*link, link_from_palm * print.points()[i], link_from_palm.linear() * print.normals()[i]});
  }
  return out;
}

}  // namespace ugcs
