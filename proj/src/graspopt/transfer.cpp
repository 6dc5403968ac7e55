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

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include "ugcs/common/error.hpp"
#include "ugcs/core/sphere.hpp"
#include "ugcs/graspopt/graspopt.hpp"

namespace ugcs::opt {
namespace {

struct TransferProblem {
  const kin::GripperModel* model;
  std::vector<kin::LinkPoint> link_points;
  std::vector<Eigen::Vector3d> targets;  // source point matched to each target print point
  double w_dist;
  double w_joint;
};

EnergyReport evaluate(const TransferProblem& p, const kin::GraspConfig& q) {
  const kin::PosedPoints posed = kin::pose_points(*p.model, q, p.link_points);
  EnergyReport r;
  for (std::size_t j = 0; j < posed.positions.size(); ++j) r.e_dist += (posed.positions[j] - p.targets[j]).squaredNorm();
  r.e_dist /= static_cast<double>(posed.positions.size());
  r.e_joint = joint_penalty(*p.model, q.joints);
  r.total = p.w_dist * r.e_dist + p.w_joint * r.e_joint;
  return r;
}

// Gauss-Newton system of the least-squares form of the transfer objective.
void normal_equations(const TransferProblem& p, const kin::GraspConfig& q, Eigen::MatrixXd& h, Eigen::VectorXd& g) {
  const kin::GripperModel& model = *p.model;
  const int n = q.dof();
  h = Eigen::MatrixXd::Zero(n, n);
  g = Eigen::VectorXd::Zero(n);
  const kin::KinematicState state = kin::forward_kinematics(model, q);
  const kin::PosedPoints posed = kin::pose_points(model, state, p.link_points);
  const double w = p.w_dist / static_cast<double>(posed.positions.size());
  for (std::size_t j = 0; j < posed.positions.size(); ++j) {
    const Eigen::Matrix<double, 3, Eigen::Dynamic> jac =
        kin::point_jacobian(model, q, state, posed.links[j], posed.positions[j]);
    const Eigen::Vector3d res = posed.positions[j] - p.targets[j];
    h.noalias() += w * jac.transpose() * jac;
    g.noalias() += w * jac.transpose() * res;
  }
  for (int c = 0; c < model.num_coordinates(); ++c) {
    const auto& coord = model.coordinates()[c];
    const double v = q.joints[c];
    double res = 0.0;
    if (v > coord.upper) res = v - coord.upper;
    if (v < coord.lower) res = v - coord.lower;
    if (res != 0.0) {
      h(6 + c, 6 + c) += p.w_joint;
      g[6 + c] += p.w_joint * res;
    }
  }
}

TraceRow row(int iteration, const EnergyReport& r) { return {iteration, r.e_dist, r.e_pen, r.e_joint, r.total}; }

}  // namespace

TransferResult transfer(const GripperPrint& source_print, const kin::GraspConfig& source_grasp,
                        const kin::GripperModel& source_model, const GripperPrint& target_print,
                        const kin::GripperModel& target_model, const OptimizationConfig& cfg) {
  cfg.validate();
  for (const GripperPrint* print : {&source_print, &target_print}) {
    if (!(print->sphere().radius > 0.0) || !print->sphere().center.allFinite()) {
      throw InvalidArgument("transfer: print '" + print->gripper_id() + "' lacks chart sphere metadata");
    }
  }
  if (source_print.gripper_id() != source_model.name() || target_print.gripper_id() != target_model.name()) {
    throw InvalidArgument("transfer: print and gripper ids do not match");
  }

  const kin::PosedPoints source =
      kin::pose_points(source_model, source_grasp, print_link_points(source_print, source_model));
  const std::vector<int> match = arc_nearest(target_print.coords(), source_print.coords());

  TransferProblem problem{&target_model, print_link_points(target_print, target_model), {}, cfg.w_dist, cfg.w_joint};
  problem.targets.reserve(match.size());
  for (int i : match) problem.targets.push_back(source.positions[i]);

  const Eigen::VectorXd open = open_joint_values(target_model);
  kin::GraspConfig local = kin::GraspConfig::zero(target_model.num_coordinates());
  local.joints = open;
  const kin::PosedPoints at_open = kin::pose_points(target_model, local, problem.link_points);
  Eigen::Matrix3Xd src(3, match.size());
  Eigen::Matrix3Xd dst(3, match.size());
  for (std::size_t j = 0; j < match.size(); ++j) {
    src.col(j) = at_open.positions[j];
    dst.col(j) = problem.targets[j];
  }
  Eigen::Isometry3d root(Eigen::umeyama(src, dst, false));
  const kin::GraspConfig q0 = kin::GraspConfig::from_pose(root, open).canonical();

  TransferResult result;
  result.initial = evaluate(problem, q0);
  result.trace.push_back(row(0, result.initial));

  kin::GraspConfig q = q0;
  EnergyReport current = result.initial;
  double mu = 1e-3;
  Eigen::MatrixXd h;
  Eigen::VectorXd g;
  for (int it = 0; it < cfg.iterations && current.total > 0.0; ++it) {
    normal_equations(problem, q, h, g);
    // Joints resting on a limit and pushed outward stay fixed for this step.
    for (int c = 0; c < target_model.num_coordinates(); ++c) {
      const auto& coord = target_model.coordinates()[c];
      const int k = 6 + c;
      if ((q.joints[c] <= coord.lower && g[k] > 0.0) || (q.joints[c] >= coord.upper && g[k] < 0.0)) {
        h.row(k).setZero();
        h.col(k).setZero();
        h(k, k) = 1.0;
        g[k] = 0.0;
      }
    }
    bool accepted = false;
    while (mu < 1e12) {
      Eigen::MatrixXd damped = h;
      damped.diagonal() += mu * (h.diagonal().array() + 1e-12).matrix();
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      kin::GraspConfig trial = kin::GraspConfig::from_vector(q.to_vector() + step);
      trial.joints = kin::clamp_to_limits(target_model, trial.joints);
      const EnergyReport r = evaluate(problem, trial);
      if (r.total < current.total) {
        const double gain = current.total - r.total;
        q = trial;
        current = r;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (gain <= cfg.tolerance || step.norm() < 1e-15) mu = 1e12;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted || mu >= 1e12) {
      if (accepted) result.trace.push_back(row(it + 1, current));
      break;
    }
    result.trace.push_back(row(it + 1, current));
  }

  q.joints = kin::clamp_to_limits(target_model, q.joints);
  q = q.canonical();
  EnergyReport report = evaluate(problem, q);
  if (report.total > result.initial.total) {
    q = q0;
    report = result.initial;
  }
  result.config = q;
  result.report = report;
  return result;
}

}  // namespace ugcs::opt
