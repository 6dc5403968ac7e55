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

#include "ugcs/core/object_map.hpp"

#include <algorithm>
#include <cmath>

#include "ugcs/common/error.hpp"
#include "ugcs/common/parallel.hpp"
#include "ugcs/geom/kdtree.hpp"
#include "ugcs/geom/primitives.hpp"

namespace ugcs {

void ObjectCloud::validate() const {
  if (points.empty()) throw InvalidArgument("object cloud '" + object_id + "' is empty");
  if (normals.size() != points.size()) throw InvalidArgument("object cloud: points and normals differ in length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) throw InvalidArgument("object cloud: non-finite point");
    if (std::abs(normals[i].norm() - 1.0) > 1e-6) throw InvalidArgument("object cloud: normal is not unit length");
  }
}

ObjectCloud sample_object(const geom::TriMesh& mesh, std::size_t count, std::uint64_t seed, std::string object_id,
                          std::string source) {
  geom::SurfaceSamples samples = geom::sample_surface(mesh, count, seed);
  ObjectCloud cloud{std::move(object_id), std::move(samples.points), std::move(samples.normals), std::move(source)};
  cloud.validate();
  return cloud;
}

std::size_t CoordinateMap::contact_count() const {
  return static_cast<std::size_t>(std::count(contact.begin(), contact.end(), true));
}

void CoordinateMap::validate(std::size_t expected_size) const {
  if (coords.size() != expected_size || contact.size() != expected_size) {
    throw InvalidArgument("coordinate map: expected " + std::to_string(expected_size) + " entries");
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (contact[i] == (coords[i] == geom::kNoContactCoord)) {
      throw InvalidArgument("coordinate map: entry " + std::to_string(i) + " disagrees with its contact flag");
    }
    if (!(coords[i].lambda >= 0.0 && coords[i].lambda < 1.0 && coords[i].phi >= 0.0 && coords[i].phi < 1.0)) {
      throw InvalidArgument("coordinate map: entry " + std::to_string(i) + " out of range");
    }
  }
}

CoordinateMap object_map_from_grasp(const GripperPrint& print, const kin::GraspConfig& grasp,
                                    const kin::GripperModel& model, const ObjectCloud& object,
                                    const ObjectMapOptions& options) {
  const kin::PosedPoints posed = kin::pose_points(model, grasp, print_link_points(print, model));
  const geom::KdTree tree(posed.positions);
  const double t2 = options.contact_threshold * options.contact_threshold;

  CoordinateMap map;
  map.coords.assign(object.size(), geom::kNoContactCoord);
  std::vector<char> contact(object.size(), 0);
  parallel_for(object.size(), options.threads, [&](std::size_t i) {
    const auto match = tree.nearest(object.points[i]);
    if (match.squared_distance <= t2) {
      map.coords[i] = print.coords()[match.index];
      contact[i] = 1;
    }
  });
  map.contact.assign(contact.begin(), contact.end());
  return map;
}

}  // namespace ugcs
