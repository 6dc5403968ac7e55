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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "ugcs/core/object_map.hpp"
#include "ugcs/core/print.hpp"
#include "ugcs/geom/mesh.hpp"
#include "ugcs/kinematics/kinematics.hpp"
#include "ugcs/kinematics/model.hpp"

namespace ugcs::opt {

struct OptimizationConfig {
  int iterations = 300;
  double learning_rate = 1e-2;
  int decay_every = 100;
  double decay_factor = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.95;
  // Gradients longer than this are rescaled before the moment update; 0 disables.
  double gradient_clip = 0.0;
  double w_dist = 1.0;
  double w_pen = 10.0;
  double w_joint = 1.0;
  // Stop once the total changes by less than this between iterations.
  double tolerance = 1e-14;
  std::uint64_t seed = 0;
  double lambda_ub = 0.2;
  double phi_lb = 0.8;
  double standoff = 0.1;
  bool refine = false;
  double refine_step = 0.5;
  // Std of the seeded perturbation applied to the initial pose (m, rad).
  double init_jitter_translation = 0.0;
  double init_jitter_rotation = 0.0;
  // Masked points closer than this arc (rad) to the no-contact pole are ignored.
  double pole_guard = 0.05;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
};

struct CorrespondenceSet {
  std::vector<int> object_indices;  // ascending, unique
  std::vector<int> print_indices;
  std::vector<double> arc_distances;  // radians

  std::size_t size() const { return object_indices.size(); }
};

// Throws EmptyCorrespondence when no masked point survives the pole guard.
CorrespondenceSet correspond(const CoordinateMap& map, const GripperPrint& print, double pole_guard = 0.05);

// Arc-nearest print index for each query coordinate, lowest index on ties.
std::vector<int> arc_nearest(const std::vector<geom::SphericalCoord>& queries,
                             const std::vector<geom::SphericalCoord>& targets);

struct InitPose {
  Eigen::Isometry3d palm_pose = Eigen::Isometry3d::Identity();
  std::vector<int> support;  // object indices forming the palm patch
  bool fallback = false;     // singleton patch used
};

// Throws Uninitializable when the map has no usable contact point.
InitPose init_pose(const CoordinateMap& map, const ObjectCloud& object, const GripperPrint& print,
                   const OptimizationConfig& cfg);

struct EnergyReport {
  double e_dist = 0.0;
  double e_pen = 0.0;
  double e_joint = 0.0;
  double total = 0.0;
  // False when the object mesh is not watertight and e_pen uses a best-effort sign.
  bool penetration_reliable = true;
};

struct EnergyTerms {
  EnergyReport report;
  Eigen::VectorXd gradient;  // d total / d q, layout of GraspConfig::to_vector
};

// Fixed inputs shared by every energy evaluation of one synthesis run.
struct SynthesisProblem {
  const kin::GripperModel* model = nullptr;
  const GripperPrint* print = nullptr;
  const geom::TriMesh* object_mesh = nullptr;
  const ObjectCloud* object = nullptr;
  CorrespondenceSet correspondences;
  std::vector<kin::LinkPoint> link_points;

  SynthesisProblem(const kin::GripperModel& model, const GripperPrint& print, const geom::TriMesh& object_mesh,
                   const ObjectCloud& object, CorrespondenceSet correspondences);
};

double joint_penalty(const kin::GripperModel& model, const Eigen::VectorXd& joints);

EnergyTerms energy(const SynthesisProblem& problem, const kin::GraspConfig& q, const OptimizationConfig& cfg,
                   bool with_gradient = true);

struct TraceRow {
  int iteration = 0;
  double e_dist = 0.0;
  double e_pen = 0.0;
  double e_joint = 0.0;
  double total = 0.0;
};

class Diverged : public std::runtime_error {
 public:
  Diverged(const std::string& what, std::vector<TraceRow> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  std::vector<TraceRow> trace_;
};

struct SynthesisResult {
  kin::GraspConfig config;
  EnergyReport initial;
  EnergyReport report;
  std::vector<TraceRow> trace;
  InitPose init;
  bool refined = false;
};

SynthesisResult synthesize(const CoordinateMap& map, const GripperPrint& print, const kin::GripperModel& model,
                           const geom::TriMesh& object_mesh, const ObjectCloud& object,
                           const OptimizationConfig& cfg = {});

struct TransferResult {
  kin::GraspConfig config;
  EnergyReport initial;
  EnergyReport report;
  std::vector<TraceRow> trace;
};

TransferResult transfer(const GripperPrint& source_print, const kin::GraspConfig& source_grasp,
                        const kin::GripperModel& source_model, const GripperPrint& target_print,
                        const kin::GripperModel& target_model, const OptimizationConfig& cfg = {});

// Population standard deviation of all joint values pooled across grasps.
double diversity(const std::vector<kin::GraspConfig>& grasps);

struct QualityReport {
  std::size_t contacts = 0;
  double max_penetration = 0.0;
  bool antipodal = false;
};

QualityReport quality_proxy(const GripperPrint& print, const kin::GripperModel& model, const kin::GraspConfig& q,
                            const geom::TriMesh& object_mesh, double contact_distance = 0.002);

}  // namespace ugcs::opt
