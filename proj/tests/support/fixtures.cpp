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

#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "ugcs/geom/primitives.hpp"
#include "ugcs/kinematics/so3.hpp"

#ifndef UGCS_ASSET_DIR
#error "UGCS_ASSET_DIR must be defined"
#endif

namespace ugcs::testing {

std::filesystem::path asset(const std::string& name) { return std::filesystem::path(UGCS_ASSET_DIR) / name; }

TempDir::TempDir() {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    const auto candidate = base / ("ugcs_test_" + std::to_string(rd()));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

namespace {

std::mutex cache_mutex;

GripperBundle make_bundle(const std::string& gripper, std::size_t rays) {
  const std::string file = asset(gripper + ".urdf").string();
  kin::GripperModel model = kin::load_gripper(file);
  SphereFit fit = max_graspable_sphere(model);
  GripperPrint print = build_print(model, fit.sphere, fit.capture_config, rays, {1, file});
  return {file, std::move(model), std::move(fit), std::move(print)};
}

}  // namespace

const GripperBundle& bundle(const std::string& gripper, std::size_t rays) {
  static std::map<std::pair<std::string, std::size_t>, std::unique_ptr<GripperBundle>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{gripper, rays}];
  if (!slot) slot = std::make_unique<GripperBundle>(make_bundle(gripper, rays));
  return *slot;
}

const SelfSphere& self_sphere(const std::string& gripper, int subdivisions) {
  const GripperBundle& b = bundle(gripper);
  static std::map<std::pair<std::string, int>, std::unique_ptr<SelfSphere>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& slot = cache[{gripper, subdivisions}];
  if (!slot) {
    geom::TriMesh mesh = geom::make_icosphere(b.fit.sphere.radius, subdivisions);
    ObjectCloud cloud = sample_object(mesh, 2048, 7, gripper + "_sphere");
    CoordinateMap map = object_map_from_grasp(b.print, b.fit.capture_config, b.model, cloud);
    slot = std::make_unique<SelfSphere>(SelfSphere{std::move(mesh), std::move(cloud), std::move(map)});
  }
  return *slot;
}

double rotation_error(const kin::GraspConfig& a, const kin::GraspConfig& b) {
  return kin::rotation_distance(kin::so3_exp(a.rotation), kin::so3_exp(b.rotation));
}

kin::GraspConfig random_grasp(const kin::GripperModel& model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  kin::GraspConfig q = kin::GraspConfig::zero(model.num_coordinates());
  q.translation = 0.2 * Eigen::Vector3d(u(rng), u(rng), u(rng));
  q.rotation = 2.0 * Eigen::Vector3d(u(rng), u(rng), u(rng));
  for (int c = 0; c < model.num_coordinates(); ++c) {
    std::uniform_real_distribution<double> v(model.coordinates()[c].lower, model.coordinates()[c].upper);
    q.joints[c] = v(rng);
  }
  return q;
}

PatchScene south_patch_scene() {
  PatchScene s;
  s.cloud = ugcs::sample_object(geom::make_icosphere(0.05, 4), 2000, 17, "ball");
  s.map.coords.assign(s.cloud.size(), geom::kNoContactCoord);
  s.map.contact.assign(s.cloud.size(), false);
  for (std::size_t i = 0; i < s.cloud.size(); ++i) {
    const Eigen::Vector3d& p = s.cloud.points[i];
    if (p.z() < -0.045) {
      // Patch longitude spread in [0, 0.2] so the spin is defined.
      s.map.coords[i] = {0.1 + 0.1 * std::atan2(p.y(), p.x()) / M_PI, 0.95};
      s.map.contact[i] = true;
      s.patch.push_back(static_cast<int>(i));
    } else if (p.z() > 0.04) {
      s.map.coords[i] = {0.6, 0.4};
      s.map.contact[i] = true;
    }
  }
  return s;
}

}  // namespace ugcs::testing
