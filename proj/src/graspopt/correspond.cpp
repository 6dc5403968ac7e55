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

#include "ugcs/common/error.hpp"
#include "ugcs/geom/kdtree.hpp"
#include "ugcs/graspopt/graspopt.hpp"

namespace ugcs::opt {

void OptimizationConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("config: iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("config: learning_rate must be > 0");
  if (decay_every < 1) throw InvalidArgument("config: decay_every must be >= 1");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) throw InvalidArgument("config: decay_factor must be in (0, 1]");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw InvalidArgument("config: betas must be in [0, 1)");
  if (!(gradient_clip >= 0.0)) throw InvalidArgument("config: gradient_clip must be >= 0");
  if (!(w_dist > 0.0 && w_pen > 0.0 && w_joint > 0.0)) throw InvalidArgument("config: weights must be > 0");
  if (!(tolerance >= 0.0)) throw InvalidArgument("config: tolerance must be >= 0");
  if (!(lambda_ub > 0.0 && lambda_ub < 1.0)) throw InvalidArgument("config: lambda_ub must be in (0, 1)");
  if (!(phi_lb > 0.0 && phi_lb < 1.0)) throw InvalidArgument("config: phi_lb must be in (0, 1)");
  if (!(standoff >= 0.0 && std::isfinite(standoff))) throw InvalidArgument("config: standoff must be >= 0");
  if (!(refine_step > 0.0)) throw InvalidArgument("config: refine_step must be > 0");
  if (!(init_jitter_translation >= 0.0 && init_jitter_rotation >= 0.0)) {
    throw InvalidArgument("config: init jitter must be >= 0");
  }
  if (!(pole_guard >= 0.0)) throw InvalidArgument("config: pole_guard must be >= 0");
}

std::vector<int> arc_nearest(const std::vector<geom::SphericalCoord>& queries,
                             const std::vector<geom::SphericalCoord>& targets) {
  if (targets.empty()) throw InvalidArgument("arc_nearest: no targets");
  std::vector<Eigen::Vector3d> units;
  units.reserve(targets.size());
  for (const auto& c : targets) units.push_back(geom::unit_from_spherical(c));
  const geom::KdTree tree(std::move(units));

  std::vector<int> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Eigen::Vector3d u = geom::unit_from_spherical(queries[i]);
    const double chord = std::sqrt(tree.nearest(u).squared_distance);
    int best = -1;
    double best_arc = 0.0;
    for (int j : tree.within(u, chord + 1e-9)) {
      const double arc = geom::haversine(queries[i], targets[j]);
      if (best < 0 || arc < best_arc) {
        best = j;
        best_arc = arc;
      }
    }
    out[i] = best;
  }
  return out;
}

CorrespondenceSet correspond(const CoordinateMap& map, const GripperPrint& print, double pole_guard) {
  CorrespondenceSet set;
  std::vector<geom::SphericalCoord> queries;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.contact[i]) continue;
    if (geom::haversine(map.coords[i], geom::kNoContactCoord) < pole_guard) continue;
    set.object_indices.push_back(static_cast<int>(i));
    queries.push_back(map.coords[i]);
  }
  if (set.object_indices.empty()) throw EmptyCorrespondence("empty correspondence: the map has no contact points");
  set.print_indices = arc_nearest(queries, print.coords());
  set.arc_distances.resize(queries.size());
  for (std::size_t k = 0; k < queries.size(); ++k) {
    set.arc_distances[k] = geom::haversine(queries[k], print.coords()[set.print_indices[k]]);
  }
  return set;
}

}  // namespace ugcs::opt
