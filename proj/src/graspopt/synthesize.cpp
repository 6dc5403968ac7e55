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
#include "ugcs/core/sphere.hpp"
#include "ugcs/geom/kdtree.hpp"
#include "ugcs/graspopt/graspopt.hpp"
#include "ugcs/kinematics/so3.hpp"

namespace ugcs::opt {
namespace {

TraceRow row(int iteration, const EnergyReport& r) { return {iteration, r.e_dist, r.e_pen, r.e_joint, r.total}; }

kin::GraspConfig project(const kin::GripperModel& model, kin::GraspConfig q) {
  q.joints = kin::clamp_to_limits(model, q.joints);
  return q.canonical();
}

// One gradient step on the mean squared distance between each corresponded
// object point and its Euclidean-nearest posed print point.
kin::GraspConfig refinement_step(const SynthesisProblem& problem, const kin::GraspConfig& q,
                                 const OptimizationConfig& cfg) {
  const kin::GripperModel& model = *problem.model;
  const kin::KinematicState state = kin::forward_kinematics(model, q);
  const kin::PosedPoints posed = kin::pose_points(model, state, problem.link_points);
  const geom::KdTree tree(posed.positions);
  const auto& corr = problem.correspondences;
  const double inv_k = 1.0 / static_cast<double>(corr.size());
  std::vector<int> links;
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> grads;
  for (int i : corr.object_indices) {
    const Eigen::Vector3d& o = problem.object->points[i];
    const int j = tree.nearest(o).index;
    links.push_back(posed.links[j]);
    points.push_back(posed.positions[j]);
    grads.push_back(2.0 * inv_k * (posed.positions[j] - o));
  }
  const Eigen::VectorXd g = kin::pullback_point_gradients(model, q, state, links, points, grads);
  return kin::GraspConfig::from_vector(q.to_vector() - cfg.refine_step * g);
}

// Optimizer coordinates: the root translation is replaced by the world
// position of a pivot fixed in the root frame, so rotations turn the gripper
// about the chart center instead of the root origin.
struct PivotChart {
  Eigen::Vector3d pivot_root;

  Eigen::VectorXd to_internal(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = x;
    y.head<3>() = x.head<3>() + kin::so3_exp(x.segment<3>(3)) * pivot_root;
    return y;
  }
  Eigen::VectorXd from_internal(const Eigen::VectorXd& y) const {
    Eigen::VectorXd x = y;
    x.head<3>() = y.head<3>() - kin::so3_exp(y.segment<3>(3)) * pivot_root;
    return x;
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g) const {
    Eigen::VectorXd out = g;
    const Eigen::Vector3d omega = x.segment<3>(3);
    const Eigen::Vector3d arm = kin::so3_exp(omega) * pivot_root;
    out.segment<3>(3) -= kin::so3_left_jacobian(omega).transpose() * arm.cross(g.head<3>());
    return out;
  }
};

}  // namespace

SynthesisResult synthesize(const CoordinateMap& map, const GripperPrint& print, const kin::GripperModel& model,
                           const geom::TriMesh& object_mesh, const ObjectCloud& object,
                           const OptimizationConfig& cfg) {
  cfg.validate();
  object.validate();
  map.validate(object.size());
  if (print.gripper_id() != model.name()) {
    throw InvalidArgument("print gripper '" + print.gripper_id() + "' does not match model '" + model.name() + "'");
  }
  SynthesisProblem problem(model, print, object_mesh, object, correspond(map, print, cfg.pole_guard));

  SynthesisResult result;
  result.init = init_pose(map, object, print, cfg);
  const kin::GraspConfig q0 =
      config_for_palm_pose(model, result.init.palm_pose, open_joint_values(model)).canonical();
  const EnergyTerms start = energy(problem, q0, cfg);
  result.initial = start.report;
  result.trace.push_back(row(0, start.report));
  const double e0 = start.report.total;

  const kin::KinematicState print_state = kin::forward_kinematics(model, print.print_config());
  const PivotChart chart{print_state.links[model.root()].inverse() * (print_state.links[model.palm()] *
                                                                     print.sphere().center)};
  Eigen::VectorXd y = chart.to_internal(q0.to_vector());
  Eigen::VectorXd best_x = q0.to_vector();
  double best_total = e0;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(y.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(y.size());
  const double kBeta1 = cfg.beta1;
  const double kBeta2 = cfg.beta2;
  constexpr double kEps = 1e-8;
  int blowup = 0;
  double previous = e0;
  EnergyTerms terms = start;
  for (int it = 0; it < cfg.iterations && e0 > 0.0; ++it) {
    const double lr = cfg.learning_rate * std::pow(cfg.decay_factor, it / cfg.decay_every);
    Eigen::VectorXd g = chart.gradient(chart.from_internal(y), terms.gradient);
    if (cfg.gradient_clip > 0.0 && g.norm() > cfg.gradient_clip) g *= cfg.gradient_clip / g.norm();
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(kBeta1, it + 1);
    const double c2 = 1.0 - std::pow(kBeta2, it + 1);
    y -= lr * ((m / c1).array() / ((v / c2).array().sqrt() + kEps)).matrix();

    const Eigen::VectorXd x = chart.from_internal(y);
    terms = energy(problem, kin::GraspConfig::from_vector(x), cfg);
    const double total = terms.report.total;
    result.trace.push_back(row(it + 1, terms.report));
    if (total < best_total) {
      best_total = total;
      best_x = x;
    }
    blowup = total > 10.0 * e0 ? blowup + 1 : 0;
    if (blowup >= 50) throw Diverged("optimization diverged", result.trace);
    if (!std::isfinite(total)) throw Diverged("optimization diverged (non-finite energy)", result.trace);
    if (std::abs(previous - total) < cfg.tolerance) break;
    previous = total;
  }

  kin::GraspConfig q = project(model, kin::GraspConfig::from_vector(best_x));
  EnergyReport report = energy(problem, q, cfg, false).report;
  if (report.total > e0) {
    q = q0;
    report = start.report;
  }
  if (cfg.refine) {
    const kin::GraspConfig refined = project(model, refinement_step(problem, q, cfg));
    const EnergyReport refined_report = energy(problem, refined, cfg, false).report;
    if (refined_report.total <= e0) {
      q = refined;
      report = refined_report;
      result.refined = true;
    }
  }
  result.config = q;
  result.report = report;
  return result;
}

}  // namespace ugcs::opt
