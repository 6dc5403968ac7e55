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

#include "ugcs/common/error.hpp"
#include "ugcs/graspopt/graspopt.hpp"

namespace ugcs::opt {

SynthesisProblem::SynthesisProblem(const kin::GripperModel& m, const GripperPrint& p, const geom::TriMesh& mesh,
                                   const ObjectCloud& o, CorrespondenceSet c)
    : model(&m), print(&p), object_mesh(&mesh), object(&o), correspondences(std::move(c)),
      link_points(print_link_points(p, m)) {
  if (mesh.empty()) throw InvalidArgument("synthesis: object mesh is empty");
  for (std::size_t k = 0; k < correspondences.size(); ++k) {
    if (correspondences.object_indices[k] < 0 || correspondences.object_indices[k] >= static_cast<int>(o.size()) ||
        correspondences.print_indices[k] < 0 || correspondences.print_indices[k] >= static_cast<int>(p.size())) {
      throw InvalidArgument("synthesis: correspondence index out of range");
    }
  }
}

double joint_penalty(const kin::GripperModel& model, const Eigen::VectorXd& joints) {
  double e = 0.0;
  for (int c = 0; c < model.num_coordinates(); ++c) {
    const auto& coord = model.coordinates()[c];
    const double over = std::max(0.0, joints[c] - coord.upper);
    const double under = std::max(0.0, coord.lower - joints[c]);
    e += over * over + under * under;
  }
  return e;
}

EnergyTerms energy(const SynthesisProblem& problem, const kin::GraspConfig& q, const OptimizationConfig& cfg,
                   bool with_gradient) {
  const kin::GripperModel& model = *problem.model;
  const geom::TriMesh& mesh = *problem.object_mesh;
  const CorrespondenceSet& corr = problem.correspondences;
  const kin::KinematicState state = kin::forward_kinematics(model, q);
  const kin::PosedPoints posed = kin::pose_points(model, state, problem.link_points);

  EnergyTerms out;
  EnergyReport& r = out.report;
  std::vector<int> links;
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> grads;

  const double inv_k = corr.size() == 0 ? 0.0 : 1.0 / static_cast<double>(corr.size());
  for (std::size_t k = 0; k < corr.size(); ++k) {
    const int j = corr.print_indices[k];
    const Eigen::Vector3d d = posed.positions[j] - problem.object->points[corr.object_indices[k]];
    r.e_dist += d.squaredNorm();
    if (with_gradient) {
      links.push_back(posed.links[j]);
      points.push_back(posed.positions[j]);
      grads.push_back(cfg.w_dist * 2.0 * inv_k * d);
    }
  }
  r.e_dist *= inv_k;

  r.penetration_reliable = mesh.watertight();
  const double inv_m = 1.0 / static_cast<double>(posed.positions.size());
  for (std::size_t j = 0; j < posed.positions.size(); ++j) {
    const Eigen::Vector3d& p = posed.positions[j];
    if (!mesh.bounds().contains(p)) continue;
    const geom::SignedDistance sd = geom::signed_distance(mesh, p);
    if (!(sd.value < 0.0)) continue;
    r.e_pen -= sd.value * inv_m;
    if (with_gradient && sd.closest.distance > 0.0) {
      links.push_back(posed.links[j]);
      points.push_back(p);
      grads.push_back(cfg.w_pen * inv_m * (p - sd.closest.point) / sd.closest.distance);
    }
  }

  r.e_joint = joint_penalty(model, q.joints);
  r.total = cfg.w_dist * r.e_dist + cfg.w_pen * r.e_pen + cfg.w_joint * r.e_joint;

  if (with_gradient) {
    out.gradient = kin::pullback_point_gradients(model, q, state, links, points, grads);
    for (int c = 0; c < model.num_coordinates(); ++c) {
      const auto& coord = model.coordinates()[c];
      const double v = q.joints[c];
      if (v > coord.upper) out.gradient[6 + c] += cfg.w_joint * 2.0 * (v - coord.upper);
      if (v < coord.lower) out.gradient[6 + c] -= cfg.w_joint * 2.0 * (coord.lower - v);
    }
  }
  return out;
}

}  // namespace ugcs::opt
