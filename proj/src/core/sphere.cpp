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

#include "ugcs/core/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ugcs/common/error.hpp"

namespace ugcs {
namespace {

using kin::GripperModel;

// Link transforms relative to the palm frame.
std::vector<Eigen::Isometry3d> palm_relative_links(const GripperModel& model, const Eigen::VectorXd& joints) {
  kin::GraspConfig q = kin::GraspConfig::zero(model.num_coordinates());
  q.joints = joints;
  const kin::KinematicState state = kin::forward_kinematics(model, q);
  const Eigen::Isometry3d palm_inv = state.links[model.palm()].inverse();
  std::vector<Eigen::Isometry3d> out(state.links.size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = palm_inv * state.links[l];
  return out;
}

// Links moved by any coordinate in `coords`.
std::vector<int> links_driven_by(const GripperModel& model, const std::vector<int>& coords) {
  std::vector<int> out;
  for (int l = 0; l < static_cast<int>(model.links().size()); ++l) {
    for (int j : model.moving_ancestors(l)) {
      if (std::find(coords.begin(), coords.end(), model.joints()[j].coordinate) != coords.end()) {
        out.push_back(l);
        break;
      }
    }
  }
  return out;
}

double mean_radial_distance(const GripperModel& model, const std::vector<int>& links,
                            const std::vector<Eigen::Isometry3d>& transforms) {
  double sum = 0.0;
  std::size_t count = 0;
  for (int l : links) {
    const auto& mesh = model.links()[l].mesh;
    if (!mesh) continue;
    for (const auto& v : mesh->vertices()) {
      const Eigen::Vector3d p = transforms[l] * v;
      sum += std::hypot(p.x(), p.y());
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

struct LinkProbe {
  double penetration = -std::numeric_limits<double>::infinity();
  Eigen::Vector3d closest = Eigen::Vector3d::Zero();  // palm frame
};

LinkProbe probe_link(const GripperModel& model, int link, const Eigen::Isometry3d& palm_from_link,
                     const Sphere& sphere) {
  LinkProbe probe;
  const auto& mesh = model.links()[link].mesh;
  if (!mesh || mesh->empty()) return probe;
  const Eigen::Vector3d local = palm_from_link.inverse() * sphere.center;
  const geom::SignedDistance sd = geom::signed_distance(*mesh, local);
  probe.penetration = sphere.radius - sd.value;
  probe.closest = palm_from_link * sd.closest.point;
  return probe;
}

double max_penetration(const GripperModel& model, const std::vector<int>& links, const Eigen::VectorXd& joints,
                       const Sphere& sphere) {
  const auto transforms = palm_relative_links(model, joints);
  double worst = -std::numeric_limits<double>::infinity();
  for (int l : links) worst = std::max(worst, probe_link(model, l, transforms[l], sphere).penetration);
  return worst;
}

// Distance along -z from the palm origin to the center of a sphere of
// `radius` resting against the palm link geometry.
double palm_standoff(const GripperModel& model, double radius) {
  const auto& mesh = model.links()[model.palm()].mesh;
  if (!mesh || mesh->empty()) return radius;
  const geom::Aabb& b = mesh->bounds();
  const double extent = std::max(b.min.cwiseAbs().maxCoeff(), b.max.cwiseAbs().maxCoeff());
  double s_hi = radius + 2.0 * extent + 1e-3;
  const auto gap = [&](double s) {
    return geom::closest_point(*mesh, Eigen::Vector3d(0.0, 0.0, -s)).distance - radius;
  };
  while (gap(s_hi) < 0.0) s_hi *= 2.0;
  const auto hit = geom::ray_intersect_first(*mesh, Eigen::Vector3d(0.0, 0.0, -s_hi), Eigen::Vector3d::UnitZ());
  if (!hit) return radius;
  double s_lo = -hit->point.z();
  for (int it = 0; it < 200 && s_hi - s_lo > 1e-15; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    (gap(mid) < 0.0 ? s_lo : s_hi) = mid;
  }
  return s_hi;
}

}  // namespace

Eigen::VectorXd open_joint_values(const GripperModel& model) {
  const int n = model.num_coordinates();
  Eigen::VectorXd base(n);
  for (int c = 0; c < n; ++c) base[c] = std::clamp(0.0, model.coordinates()[c].lower, model.coordinates()[c].upper);
  Eigen::VectorXd open = base;
  for (int c = 0; c < n; ++c) {
    const auto links = links_driven_by(model, {c});
    Eigen::VectorXd lo = base;
    Eigen::VectorXd hi = base;
    lo[c] = model.coordinates()[c].lower;
    hi[c] = model.coordinates()[c].upper;
    const double r_lo = mean_radial_distance(model, links, palm_relative_links(model, lo));
    const double r_hi = mean_radial_distance(model, links, palm_relative_links(model, hi));
    open[c] = r_hi > r_lo ? hi[c] : lo[c];
  }
  return open;
}

std::vector<std::vector<int>> closing_groups(const GripperModel& model) {
  const int n = model.num_coordinates();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int l = 0; l < static_cast<int>(model.links().size()); ++l) {
    const auto& chain = model.moving_ancestors(l);
    for (std::size_t k = 1; k < chain.size(); ++k) {
      const int a = find(model.joints()[chain[0]].coordinate);
      const int b = find(model.joints()[chain[k]].coordinate);
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int c = 0; c < n; ++c) {
    const int r = find(c);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(c);
  }
  return groups;
}

SphereTrial evaluate_sphere(const GripperModel& model, double radius, const SphereSearchOptions& options) {
  SphereTrial trial;
  trial.radius = radius;
  trial.sphere.radius = radius;
  trial.sphere.center = Eigen::Vector3d(0.0, 0.0, -palm_standoff(model, radius));

  std::vector<int> all_links(model.links().size());
  std::iota(all_links.begin(), all_links.end(), 0);

  const Eigen::VectorXd open = open_joint_values(model);
  trial.joints = open;
  if (max_penetration(model, all_links, open, trial.sphere) > options.insertion_tolerance) {
    trial.reason = "sphere does not fit the open gripper";
    return trial;
  }

  Eigen::VectorXd capture = open;
  for (const auto& group : closing_groups(model)) {
    const auto links = links_driven_by(model, group);
    const auto at = [&](double t) {
      Eigen::VectorXd q = open;
      for (int c : group) {
        const auto& coord = model.coordinates()[c];
        const double closed = open[c] == coord.lower ? coord.upper : coord.lower;
        q[c] = open[c] + t * (closed - open[c]);
      }
      return q;
    };
    const auto touching = [&](double t) { return max_penetration(model, links, at(t), trial.sphere) >= 0.0; };
    double t_star = 0.0;
    if (!touching(0.0)) {
      if (!touching(1.0)) {
        t_star = 1.0;
      } else {
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (touching(mid) ? hi : lo) = mid;
        }
        t_star = hi;
      }
    }
    const Eigen::VectorXd q = at(t_star);
    for (int c : group) capture[c] = q[c];
  }
  trial.joints = capture;

  const auto transforms = palm_relative_links(model, capture);
  trial.max_penetration = -std::numeric_limits<double>::infinity();
  for (int l : all_links) {
    const LinkProbe probe = probe_link(model, l, transforms[l], trial.sphere);
    if (!std::isfinite(probe.penetration)) continue;
    trial.max_penetration = std::max(trial.max_penetration, probe.penetration);
    if (probe.penetration >= -options.contact_tolerance) {
      const Eigen::Vector3d offset = probe.closest - trial.sphere.center;
      if (offset.norm() > 0.0) trial.contacts.push_back({l, probe.closest, offset.normalized(), probe.penetration});
    }
  }
  trial.max_penetration = std::max(trial.max_penetration, 0.0);
  if (trial.max_penetration > options.max_penetration) {
    trial.reason = "penetration exceeds tolerance after closing";
    return trial;
  }
  for (std::size_t i = 0; i < trial.contacts.size() && !trial.graspable; ++i) {
    for (std::size_t j = i + 1; j < trial.contacts.size(); ++j) {
      if (trial.contacts[i].normal.dot(trial.contacts[j].normal) <= options.antipodal_dot) {
        trial.graspable = true;
        break;
      }
    }
  }
  if (!trial.graspable) trial.reason = "no antipodal contact pair";
  return trial;
}

kin::GraspConfig config_for_palm_pose(const GripperModel& model, const Eigen::Isometry3d& palm_pose,
                                      const Eigen::VectorXd& joints) {
  kin::GraspConfig q = kin::GraspConfig::zero(model.num_coordinates());
  q.joints = joints;
  const kin::KinematicState state = kin::forward_kinematics(model, q);
  const Eigen::Isometry3d root_pose = palm_pose * state.links[model.palm()].inverse();
  return kin::GraspConfig::from_pose(root_pose, joints);
}

SphereFit max_graspable_sphere(const GripperModel& model, const SphereSearchOptions& options) {
  const std::string failure = "gripper '" + model.name() + "': sphere fit failure";
  if (model.num_coordinates() == 0) throw SphereFitFailure(failure + " (no actuated joints)");
  const auto steps = static_cast<long>(std::floor((options.max_radius - options.min_radius) / options.resolution + 1e-9));
  const double first = options.min_radius / options.resolution;
  const auto radius_at = [&](long k) { return (first + static_cast<double>(k)) * options.resolution; };

  SphereTrial best = evaluate_sphere(model, radius_at(0), options);
  if (!best.graspable) throw SphereFitFailure(failure + " (" + best.reason + " at the minimum radius)");
  long lo = 0;
  long hi = steps;
  SphereTrial top = evaluate_sphere(model, radius_at(hi), options);
  if (top.graspable) {
    best = top;
  } else {
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      SphereTrial trial = evaluate_sphere(model, radius_at(mid), options);
      if (trial.graspable) {
        lo = mid;
        best = std::move(trial);
      } else {
        hi = mid;
      }
    }
  }

  SphereFit fit;
  fit.sphere = best.sphere;
  fit.trial = best;
  fit.open_joints = open_joint_values(model);
  Eigen::Isometry3d palm_pose = Eigen::Isometry3d::Identity();
  palm_pose.translation() = -best.sphere.center;
  fit.capture_config = config_for_palm_pose(model, palm_pose, best.joints);
  return fit;
}

}  // namespace ugcs
