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

#include <algorithm>
#include <cmath>
#include <set>

#include "ugcs/common/error.hpp"
#include "ugcs/graspopt/graspopt.hpp"

namespace ugcs::opt {

double diversity(const std::vector<kin::GraspConfig>& grasps) {
  if (grasps.size() < 2) throw InvalidArgument("diversity: at least 2 grasps are required");
  const Eigen::Index j = grasps.front().joints.size();
  for (const auto& q : grasps) {
    if (q.joints.size() != j) throw InvalidArgument("diversity: grasps come from different models");
  }
  const double n = static_cast<double>(grasps.size()) * static_cast<double>(j);
  if (n == 0.0) return 0.0;
  const double shift = grasps.front().joints[0];
  double sum = 0.0;
  for (const auto& q : grasps) sum += (q.joints.array() - shift).sum();
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& q : grasps) ss += (q.joints.array() - shift - mean).square().sum();
  return std::sqrt(ss / n);
}

QualityReport quality_proxy(const GripperPrint& print, const kin::GripperModel& model, const kin::GraspConfig& q,
                            const geom::TriMesh& object_mesh, double contact_distance) {
  const kin::PosedPoints posed = kin::pose_points(model, q, print_link_points(print, model));
  QualityReport report;
  std::set<int> faces;
  const double reach2 = contact_distance * contact_distance;
  for (const auto& p : posed.positions) {
    if (object_mesh.bounds().squared_distance(p) > reach2) continue;
    const geom::SignedDistance sd = geom::signed_distance(object_mesh, p);
    report.max_penetration = std::max(report.max_penetration, -sd.value);
    if (sd.value <= contact_distance) {
      ++report.contacts;
      faces.insert(sd.closest.triangle_index);
    }
  }
  const std::vector<int> ids(faces.begin(), faces.end());
  for (std::size_t a = 0; a < ids.size() && !report.antipodal; ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      if (object_mesh.face_normals()[ids[a]].dot(object_mesh.face_normals()[ids[b]]) <= -0.5) {
        report.antipodal = true;
        break;
      }
    }
  }
  return report;
}

}  // namespace ugcs::opt
