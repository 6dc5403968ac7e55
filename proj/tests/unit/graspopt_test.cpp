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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "ugcs/common/error.hpp"
#include "ugcs/geom/primitives.hpp"
#include "ugcs/graspopt/graspopt.hpp"
#include "ugcs/kinematics/so3.hpp"

namespace {

using Eigen::Isometry3d;
using Eigen::Vector3d;
using Eigen::VectorXd;
namespace geom = ugcs::geom;
namespace kin = ugcs::kin;
namespace opt = ugcs::opt;
namespace ut = ugcs::testing;

const std::vector<std::string> kGrippers = {"parallel_jaw", "three_finger", "hand5"};

// Print with hand-placed coordinates; geometry is irrelevant to matching.
ugcs::GripperPrint synthetic_print(const std::vector<geom::SphericalCoord>& coords) {
  ugcs::GripperPrint::Data d;
  d.gripper_id = "synthetic";
  d.sphere = {Vector3d::Zero(), 0.05};
  d.print_config = kin::GraspConfig::zero(0);
  for (const auto& c : coords) {
    d.coords.push_back(c);
    d.points.push_back(0.05 * geom::unit_from_spherical(c));
    d.links.push_back("palm");
    d.normals.push_back(-geom::unit_from_spherical(c));
  }
  return ugcs::GripperPrint(d);
}

ugcs::CoordinateMap masked_map(const std::vector<geom::SphericalCoord>& coords) {
  return {coords, std::vector<bool>(coords.size(), true)};
}

TEST(Correspond, ExactSubsetMatchesItself) {
  const auto& print = ut::bundle("three_finger").print;
  std::vector<geom::SphericalCoord> coords;
  std::vector<int> picked;
  for (std::size_t i = 0; i < print.size(); i += 7) {
    coords.push_back(print.coords()[i]);
    picked.push_back(static_cast<int>(i));
  }
  const auto corr = opt::correspond(masked_map(coords), print);
  ASSERT_EQ(corr.size(), coords.size());
  for (std::size_t k = 0; k < corr.size(); ++k) {
    EXPECT_EQ(corr.object_indices[k], static_cast<int>(k));
    EXPECT_EQ(corr.print_indices[k], picked[k]);
    EXPECT_EQ(corr.arc_distances[k], 0.0);
  }
}

TEST(Correspond, EquidistantTieGoesToLowerIndex) {
  std::vector<geom::SphericalCoord> coords;
  for (int i = 0; i < 10; ++i) coords.push_back({0.05 + 0.04 * i, 0.2});
  // Points 3 and 7 mirror each other across the query's meridian.
  coords[3] = {0.25, 0.6};
  coords[7] = {0.75, 0.6};
  const geom::SphericalCoord query{0.5, 0.9};
  const auto print = synthetic_print(coords);
  ASSERT_EQ(geom::haversine(query, coords[3]), geom::haversine(query, coords[7]));
  const auto corr = opt::correspond(masked_map({query}), print);
  ASSERT_EQ(corr.size(), 1u);
  EXPECT_EQ(corr.print_indices[0], 3);
  EXPECT_EQ(opt::arc_nearest({query}, coords)[0], 3);
}

TEST(Correspond, RandomMapMatchesQuadraticArgmin) {
  const auto& print = ut::bundle("parallel_jaw", 10000).print;
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<geom::SphericalCoord> coords;
  for (int i = 0; i < 500; ++i) coords.push_back({u(rng), 0.3 + 0.7 * u(rng) * 0.999});
  const auto corr = opt::correspond(masked_map(coords), print);
  ASSERT_EQ(corr.size(), coords.size());
  for (std::size_t k = 0; k < corr.size(); ++k) {
    int expected = -1;
    double best = 1e300;
    for (std::size_t j = 0; j < print.size(); ++j) {
      const double d = geom::haversine(coords[k], print.coords()[j]);
      if (d < best) {
        best = d;
        expected = static_cast<int>(j);
      }
    }
    EXPECT_EQ(corr.print_indices[k], expected);
    EXPECT_EQ(corr.arc_distances[k], best);
    EXPECT_NEAR(best, ut::arc_between(coords[k], print.coords()[expected]), 1e-9);
  }
}

TEST(Correspond, EmptyMaskAndPoleGuard) {
  const auto& print = ut::bundle("parallel_jaw").print;
  ugcs::CoordinateMap none{{{0.3, 0.7}, {0.4, 0.8}}, {false, false}};
  EXPECT_THROW(opt::correspond(none, print), ugcs::EmptyCorrespondence);
  // Masked but sitting on the no-contact pole.
  ugcs::CoordinateMap pole{{{0.0, 0.0}, {0.3, 0.01}}, {true, true}};
  EXPECT_THROW(opt::correspond(pole, print), ugcs::EmptyCorrespondence);
  ugcs::CoordinateMap mixed{{{0.0, 0.0}, {0.3, 0.7}}, {true, true}};
  const auto corr = opt::correspond(mixed, print);
  ASSERT_EQ(corr.size(), 1u);
  EXPECT_EQ(corr.object_indices[0], 1);
}

TEST(Correspond, IndependentOfObjectPositions) {
  const auto& b = ut::bundle("three_finger");
  const auto& s = ut::self_sphere("three_finger");
  ugcs::ObjectCloud scaled = s.cloud;
  for (auto& p : scaled.points) p *= 3.0;
  const geom::TriMesh mesh = geom::make_icosphere(3.0 * b.fit.sphere.radius, 3);
  const opt::SynthesisProblem a(b.model, b.print, s.mesh, s.cloud, opt::correspond(s.map, b.print));
  const opt::SynthesisProblem c(b.model, b.print, mesh, scaled, opt::correspond(s.map, b.print));
  EXPECT_EQ(a.correspondences.print_indices, c.correspondences.print_indices);
  EXPECT_EQ(a.correspondences.object_indices, c.correspondences.object_indices);
  EXPECT_EQ(a.correspondences.arc_distances, c.correspondences.arc_distances);
}

TEST(InitPose, PalmPatchContract) {
  const ut::PatchScene s = ut::south_patch_scene();
  ASSERT_GT(s.patch.size(), 10u);
  const opt::OptimizationConfig cfg;
  const opt::InitPose init = opt::init_pose(s.map, s.cloud, ut::bundle("parallel_jaw").print, cfg);
  EXPECT_FALSE(init.fallback);
  EXPECT_EQ(init.support, s.patch);
  Vector3d mean = Vector3d::Zero();
  Vector3d normal = Vector3d::Zero();
  for (int i : s.patch) {
    mean += s.cloud.points[i];
    normal += s.cloud.normals[i];
  }
  mean /= static_cast<double>(s.patch.size());
  normal.normalize();
  EXPECT_LT((init.palm_pose.translation() - (mean + 0.1 * normal)).norm(), 1e-9);
  // The patch faces -z: the palm sits 0.1 m below it and approaches along +z.
  EXPECT_LT(normal.z(), -0.99);
  const Vector3d approach = init.palm_pose.linear() * -Vector3d::UnitZ();
  EXPECT_LT(std::acos(std::clamp(approach.dot(-normal), -1.0, 1.0)), 1e-6);
  EXPECT_GT(approach.z(), 0.99);
  EXPECT_LT((init.palm_pose.linear() * init.palm_pose.linear().transpose() - Eigen::Matrix3d::Identity()).norm(),
            1e-12);
}

TEST(InitPose, SingletonFallback) {
  ut::PatchScene s = ut::south_patch_scene();
  for (int i : s.patch) s.map.coords[i].phi = 0.7;
  const int top = s.patch[s.patch.size() / 2];
  s.map.coords[top] = {0.6, 0.99};
  const opt::InitPose init = opt::init_pose(s.map, s.cloud, ut::bundle("parallel_jaw").print, {});
  EXPECT_TRUE(init.fallback);
  ASSERT_EQ(init.support, std::vector<int>{top});
  EXPECT_LT((init.palm_pose.translation() - (s.cloud.points[top] + 0.1 * s.cloud.normals[top])).norm(), 1e-12);
  const Vector3d approach = init.palm_pose.linear() * -Vector3d::UnitZ();
  EXPECT_LT((approach + s.cloud.normals[top]).norm(), 1e-9);
}

TEST(InitPose, TranslationEquivarianceAndErrors) {
  const ut::PatchScene s = ut::south_patch_scene();
  const auto& print = ut::bundle("parallel_jaw").print;
  ugcs::ObjectCloud moved = s.cloud;
  const Vector3d t(0.3, -1.2, 0.7);
  for (auto& p : moved.points) p += t;
  const auto a = opt::init_pose(s.map, s.cloud, print, {});
  const auto b = opt::init_pose(s.map, moved, print, {});
  EXPECT_LT((b.palm_pose.translation() - a.palm_pose.translation() - t).norm(), 1e-12);
  EXPECT_LT((b.palm_pose.linear() - a.palm_pose.linear()).norm(), 1e-12);

  ugcs::CoordinateMap none = s.map;
  none.contact.assign(none.size(), false);
  EXPECT_THROW(opt::init_pose(none, s.cloud, print, {}), ugcs::Uninitializable);

  opt::OptimizationConfig jitter;
  jitter.init_jitter_translation = 0.01;
  jitter.init_jitter_rotation = 0.1;
  jitter.seed = 5;
  const auto j1 = opt::init_pose(s.map, s.cloud, print, jitter);
  const auto j2 = opt::init_pose(s.map, s.cloud, print, jitter);
  EXPECT_EQ(j1.palm_pose.matrix(), j2.palm_pose.matrix());
  EXPECT_NE(j1.palm_pose.matrix(), a.palm_pose.matrix());
}

TEST(Energy, CoincidentPairsGiveZero) {
  const auto& b = ut::bundle("hand5");
  const kin::GraspConfig q = b.fit.capture_config;
  const auto posed = kin::pose_points(b.model, q, ugcs::print_link_points(b.print, b.model));
  ugcs::ObjectCloud cloud{"posed", posed.positions, posed.normals, ""};
  ugcs::CoordinateMap map{b.print.coords(), std::vector<bool>(b.print.size(), true)};
  // Object geometry far from the gripper: no penetration anywhere.
  const geom::TriMesh far = geom::make_icosphere(0.01, 2, Vector3d(5, 5, 5));
  const opt::SynthesisProblem problem(b.model, b.print, far, cloud, opt::correspond(map, b.print));
  const auto terms = opt::energy(problem, q, {});
  EXPECT_EQ(terms.report.e_dist, 0.0);
  EXPECT_EQ(terms.report.e_pen, 0.0);
  EXPECT_EQ(terms.report.e_joint, 0.0);
  EXPECT_EQ(terms.report.total, 0.0);
  EXPECT_LT(terms.gradient.norm(), 1e-12);
}

TEST(Energy, JointPenaltyIsQuadratic) {
  const auto& b = ut::bundle("hand5");
  VectorXd joints = ugcs::open_joint_values(b.model);
  EXPECT_EQ(opt::joint_penalty(b.model, joints), 0.0);
  joints[0] = b.model.coordinates()[0].upper + 0.1;
  EXPECT_NEAR(opt::joint_penalty(b.model, joints), 0.01, 1e-15);
  joints[1] = b.model.coordinates()[1].lower - 0.2;
  EXPECT_NEAR(opt::joint_penalty(b.model, joints), 0.05, 1e-15);
}

TEST(Energy, TermsMatchBruteForceOnCube) {
  const auto& b = ut::bundle("three_finger");
  const geom::TriMesh cube = geom::make_box(Vector3d(-0.05, -0.05, -0.05), Vector3d(0.05, 0.05, 0.05));
  const auto cloud = ugcs::sample_object(cube, 800, 4, "cube");
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ugcs::CoordinateMap map;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    map.coords.push_back({0.5 + 0.5 * u(rng), 0.6 + 0.3 * u(rng)});
    map.contact.push_back(i % 3 != 0);
  }
  const opt::SynthesisProblem problem(b.model, b.print, cube, cloud, opt::correspond(map, b.print));
  for (int trial = 0; trial < 5; ++trial) {
    kin::GraspConfig q = b.fit.capture_config;
    q.translation += Vector3d(u(rng), u(rng), u(rng)) * 0.02;
    q.rotation += Vector3d(u(rng), u(rng), u(rng)) * 0.3;
    q.joints.setConstant(0.3 + 0.2 * u(rng));
    q.joints[0] += 2.0;
    const auto report = opt::energy(problem, q, {}, false).report;
    const auto posed = kin::pose_points(b.model, q, ugcs::print_link_points(b.print, b.model));
    double pen = 0.0;
    int inside = 0;
    for (const auto& p : posed.positions) {
      const double sd = ut::brute_signed_distance(cube, p);
      pen += std::max(0.0, -sd);
      inside += sd < 0.0;
    }
    EXPECT_GT(inside, 0);
    EXPECT_NEAR(report.e_pen, pen / static_cast<double>(posed.positions.size()), 1e-12);
    double dist = 0.0;
    const auto& corr = problem.correspondences;
    for (std::size_t k = 0; k < corr.size(); ++k) {
      dist += (cloud.points[corr.object_indices[k]] - posed.positions[corr.print_indices[k]]).squaredNorm();
    }
    EXPECT_NEAR(report.e_dist, dist / static_cast<double>(corr.size()), 1e-12);
    EXPECT_NEAR(report.e_joint, opt::joint_penalty(b.model, q.joints), 1e-15);
    EXPECT_NEAR(report.total, report.e_dist + 10.0 * report.e_pen + report.e_joint, 1e-15);
    EXPECT_TRUE(report.penetration_reliable);
  }
}

TEST(Energy, GradientMatchesCentralDifferences) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& name : kGrippers) {
    const auto& b = ut::bundle(name);
    const auto& s = ut::self_sphere(name, 3);
    const opt::SynthesisProblem problem(b.model, b.print, s.mesh, s.cloud, opt::correspond(s.map, b.print));
    const opt::OptimizationConfig cfg;
    int accepted = 0;
    int rejected = 0;
    while (accepted < 50 && accepted + rejected < 2000) {
      kin::GraspConfig q = b.fit.capture_config;
      q.translation += Vector3d(u(rng), u(rng), u(rng)) * 0.01;
      q.rotation += Vector3d(u(rng), u(rng), u(rng)) * 0.2;
      for (int c = 0; c < q.joints.size(); ++c) {
        const auto& coord = b.model.coordinates()[c];
        q.joints[c] = coord.lower - 0.1 + (coord.upper - coord.lower + 0.2) * (0.5 + 0.5 * u(rng));
      }
      if (!ut::smooth_across_stencil(problem, q.to_vector(), 1e-6)) {
        ++rejected;
        continue;
      }
      ++accepted;
      const auto terms = opt::energy(problem, q, cfg);
      const auto f = [&](const VectorXd& x) {
        return opt::energy(problem, kin::GraspConfig::from_vector(x), cfg, false).report.total;
      };
      const VectorXd numeric = ut::central_gradient(f, q.to_vector(), 1e-6);
      const double rel = (terms.gradient - numeric).norm() / std::max(numeric.norm(), 1e-12);
      EXPECT_LE(rel, 1e-4) << name << " state " << accepted;
    }
    EXPECT_EQ(accepted, 50) << name << " rejected " << rejected;
    RecordProperty(name + "_rejected", rejected);
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
}

TEST(Energy, OpenMeshIsFlagged) {
  const auto& b = ut::bundle("parallel_jaw");
  const auto& s = ut::self_sphere("parallel_jaw");
  std::vector<std::array<int, 3>> tris(s.mesh.triangles().begin(), s.mesh.triangles().end() - 3);
  const geom::TriMesh open(s.mesh.vertices(), tris);
  const opt::SynthesisProblem problem(b.model, b.print, open, s.cloud, opt::correspond(s.map, b.print));
  EXPECT_FALSE(opt::energy(problem, b.fit.capture_config, {}, false).report.penetration_reliable);
}

TEST(Synthesize, SelfSphereRoundTrip) {
  for (const auto& name : kGrippers) {
    const auto start = std::chrono::steady_clock::now();
    const auto& b = ut::bundle(name);
    const auto& s = ut::self_sphere(name);
    const auto result = opt::synthesize(s.map, b.print, b.model, s.mesh, s.cloud);
    const kin::GraspConfig& truth = b.fit.capture_config;
    EXPECT_LE((result.config.translation - truth.translation).norm(), 0.01) << name;
    EXPECT_LE(ut::rotation_error(result.config, truth), 0.1) << name;
    EXPECT_LT(result.report.e_dist, 1e-4) << name;
    EXPECT_LE(result.report.total, result.initial.total) << name;
    for (int c = 0; c < result.config.joints.size(); ++c) {
      EXPECT_GE(result.config.joints[c], b.model.coordinates()[c].lower - 1e-9);
      EXPECT_LE(result.config.joints[c], b.model.coordinates()[c].upper + 1e-9);
    }
    EXPECT_FALSE(result.trace.empty());
    EXPECT_LE(result.trace.size(), 301u);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 60.0);
  }
}

TEST(Synthesize, JitteredStartsStillConverge) {
  const auto& b = ut::bundle("three_finger");
  const auto& s = ut::self_sphere("three_finger");
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    opt::OptimizationConfig cfg;
    cfg.seed = seed;
    cfg.init_jitter_translation = 0.005;
    cfg.init_jitter_rotation = 0.05;
    const auto result = opt::synthesize(s.map, b.print, b.model, s.mesh, s.cloud, cfg);
    EXPECT_LE(result.report.total, result.initial.total);
    EXPECT_LE(ut::rotation_error(result.config, b.fit.capture_config), 0.1) << seed;
  }
}

TEST(Synthesize, DeterministicBitwise) {
  const auto& b = ut::bundle("hand5");
  const auto& s = ut::self_sphere("hand5");
  opt::OptimizationConfig cfg;
  cfg.seed = 9;
  cfg.init_jitter_rotation = 0.02;
  cfg.refine = true;
  const auto a = opt::synthesize(s.map, b.print, b.model, s.mesh, s.cloud, cfg);
  const auto c = opt::synthesize(s.map, b.print, b.model, s.mesh, s.cloud, cfg);
  EXPECT_EQ(a.config.to_vector(), c.config.to_vector());
  EXPECT_EQ(a.report.total, c.report.total);
  ASSERT_EQ(a.trace.size(), c.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].total, c.trace[i].total);
  EXPECT_LE(a.report.total, a.initial.total);
}

TEST(Synthesize, Errors) {
  const auto& b = ut::bundle("parallel_jaw");
  const auto& s = ut::self_sphere("parallel_jaw");
  ugcs::CoordinateMap none = s.map;
  none.contact.assign(none.size(), false);
  none.coords.assign(none.size(), geom::kNoContactCoord);
  EXPECT_THROW(opt::synthesize(none, b.print, b.model, s.mesh, s.cloud), ugcs::EmptyCorrespondence);
  EXPECT_THROW(opt::synthesize(s.map, b.print, ut::bundle("hand5").model, s.mesh, s.cloud), ugcs::InvalidArgument);
  opt::OptimizationConfig bad;
  bad.iterations = -1;
  EXPECT_THROW(opt::synthesize(s.map, b.print, b.model, s.mesh, s.cloud, bad), ugcs::InvalidArgument);
  bad = {};
  bad.learning_rate = 0.0;
  EXPECT_THROW(bad.validate(), ugcs::InvalidArgument);
}

TEST(Synthesize, RunawayStepSizeDiverges) {
  const auto& b = ut::bundle("parallel_jaw");
  const auto& s = ut::self_sphere("parallel_jaw");
  opt::OptimizationConfig cfg;
  cfg.learning_rate = 50.0;
  cfg.decay_every = 1000;
  try {
    opt::synthesize(s.map, b.print, b.model, s.mesh, s.cloud, cfg);
    FAIL() << "expected divergence";
  } catch (const opt::Diverged& e) {
    EXPECT_GE(e.trace().size(), 50u);
    EXPECT_GT(e.trace().back().total, 10.0 * e.trace().front().total);
  }
}

TEST(Transfer, IdentityRecoversSourceGrasp) {
  for (const auto& name : kGrippers) {
    const auto start = std::chrono::steady_clock::now();
    const auto& b = ut::bundle(name);
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 20; ++trial) {
      const kin::GraspConfig source = ut::random_grasp(b.model, rng);
      const auto result = opt::transfer(b.print, source, b.model, b.print, b.model);
      EXPECT_LE((result.config.translation - source.translation).norm(), 1e-3) << name << " " << trial;
      EXPECT_LE(ut::rotation_error(result.config, source), 1e-2) << name << " " << trial;
      EXPECT_LE((result.config.joints - source.joints).cwiseAbs().maxCoeff(), 1e-2) << name << " " << trial;
      EXPECT_LE(result.report.total, result.initial.total);
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 60.0);
  }
}

TEST(Transfer, RigidMotionOfSourceMovesResult) {
  const auto& src = ut::bundle("parallel_jaw");
  const auto& tgt = ut::bundle("three_finger");
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const kin::GraspConfig source = ut::random_grasp(src.model, rng);
    const Isometry3d motion = ut::random_grasp(src.model, rng).root_pose();
    const kin::GraspConfig moved_source = kin::GraspConfig::from_pose(motion * source.root_pose(), source.joints);
    const auto a = opt::transfer(src.print, source, src.model, tgt.print, tgt.model);
    const auto c = opt::transfer(src.print, moved_source, src.model, tgt.print, tgt.model);
    const kin::GraspConfig expected = kin::GraspConfig::from_pose(motion * a.config.root_pose(), a.config.joints);
    EXPECT_LE((c.config.translation - expected.translation).norm(), 1e-3);
    EXPECT_LE(ut::rotation_error(c.config, expected), 1e-2);
    EXPECT_LE((c.config.joints - expected.joints).cwiseAbs().maxCoeff(), 1e-2);
  }
}

// Lowest-z corners of each finger link mesh, in world coordinates.
std::vector<Vector3d> fingertips(const kin::GripperModel& model, const kin::GraspConfig& q) {
  const auto state = kin::forward_kinematics(model, q);
  const Isometry3d palm_inv = state.links[model.palm()].inverse();
  std::vector<Vector3d> tips;
  for (std::size_t l = 0; l < model.links().size(); ++l) {
    if (static_cast<int>(l) == model.palm() || !model.links()[l].mesh) continue;
    Vector3d sum = Vector3d::Zero();
    double lowest = 1e300;
    std::vector<Vector3d> world;
    for (const auto& v : model.links()[l].mesh->vertices()) {
      world.push_back(state.links[l] * v);
      lowest = std::min(lowest, (palm_inv * world.back()).z());
    }
    int count = 0;
    for (const auto& w : world) {
      if ((palm_inv * w).z() < lowest + 1e-9) {
        sum += w;
        ++count;
      }
    }
    tips.push_back(sum / count);
  }
  return tips;
}

TEST(Transfer, MirroredFingerDescriptionKeepsFingertips) {
  const auto& src = ut::bundle("parallel_jaw");
  const auto& tgt = ut::bundle("parallel_jaw_mirrored");
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    const kin::GraspConfig source = ut::random_grasp(src.model, rng);
    const auto result = opt::transfer(src.print, source, src.model, tgt.print, tgt.model);
    const auto a = fingertips(src.model, source);
    const auto c = fingertips(tgt.model, result.config);
    ASSERT_EQ(a.size(), 2u);
    ASSERT_EQ(c.size(), 2u);
    const double straight = std::max((a[0] - c[0]).norm(), (a[1] - c[1]).norm());
    const double crossed = std::max((a[0] - c[1]).norm(), (a[1] - c[0]).norm());
    EXPECT_LE(std::min(straight, crossed), 0.005) << trial;
  }
}

TEST(Transfer, ParallelJawToThreeFingerHoldsTheSphere) {
  const auto& src = ut::bundle("parallel_jaw");
  const auto& tgt = ut::bundle("three_finger");
  const auto& s = ut::self_sphere("parallel_jaw");
  const auto result = opt::transfer(src.print, src.fit.capture_config, src.model, tgt.print, tgt.model);
  EXPECT_LE(result.report.total, result.initial.total);
  const auto quality = opt::quality_proxy(tgt.print, tgt.model, result.config, s.mesh);
  EXPECT_TRUE(quality.antipodal);
  EXPECT_GT(quality.contacts, 0u);
}

TEST(Transfer, RejectsMismatchedIdentifiers) {
  const auto& a = ut::bundle("parallel_jaw");
  const auto& c = ut::bundle("three_finger");
  EXPECT_THROW(opt::transfer(a.print, a.fit.capture_config, c.model, c.print, c.model), ugcs::InvalidArgument);
  EXPECT_THROW(opt::transfer(a.print, a.fit.capture_config, a.model, c.print, a.model), ugcs::InvalidArgument);
}

TEST(Diversity, Examples) {
  kin::GraspConfig a = kin::GraspConfig::zero(1);
  kin::GraspConfig c = kin::GraspConfig::zero(1);
  c.joints[0] = 0.2;
  EXPECT_NEAR(opt::diversity({a, c}), 0.1, 1e-15);
  EXPECT_EQ(opt::diversity({c, c, c}), 0.0);
  EXPECT_THROW(opt::diversity({a}), ugcs::InvalidArgument);
  EXPECT_THROW(opt::diversity({a, kin::GraspConfig::zero(2)}), ugcs::InvalidArgument);
}

TEST(Diversity, MatchesIndependentRecomputation) {
  const auto& b = ut::bundle("hand5");
  std::mt19937_64 rng(57);
  std::vector<kin::GraspConfig> grasps;
  std::vector<VectorXd> values;
  for (int i = 0; i < 64; ++i) {
    grasps.push_back(ut::random_grasp(b.model, rng));
    values.push_back(grasps.back().joints);
  }
  EXPECT_NEAR(opt::diversity(grasps), ut::pooled_std(values), 1e-12);
}

TEST(Quality, FarAwayGraspHasNoContacts) {
  const auto& b = ut::bundle("parallel_jaw");
  const auto& s = ut::self_sphere("parallel_jaw");
  kin::GraspConfig far = b.fit.capture_config;
  far.translation.x() += 1.0;
  const auto q = opt::quality_proxy(b.print, b.model, far, s.mesh);
  EXPECT_EQ(q.contacts, 0u);
  EXPECT_FALSE(q.antipodal);
  EXPECT_EQ(q.max_penetration, 0.0);
}

TEST(Quality, ParallelJawClosedOnBoxIsAntipodal) {
  const auto& b = ut::bundle("parallel_jaw");
  const geom::TriMesh box = geom::make_box(Vector3d(-0.03, -0.02, -0.04), Vector3d(0.03, 0.02, 0.03));
  kin::GraspConfig q = b.fit.capture_config;
  q.joints[0] = 0.02;
  const auto touching = opt::quality_proxy(b.print, b.model, q, box);
  EXPECT_TRUE(touching.antipodal);
  EXPECT_GT(touching.contacts, 0u);
  EXPECT_LE(touching.max_penetration, 1e-12);

  q.joints[0] = 0.028;
  const auto pressing = opt::quality_proxy(b.print, b.model, q, box);
  const auto posed = kin::pose_points(b.model, q, ugcs::print_link_points(b.print, b.model));
  double deepest = 0.0;
  for (const auto& p : posed.positions) deepest = std::max(deepest, -ut::brute_signed_distance(box, p));
  EXPECT_GT(pressing.max_penetration, 0.0);
  EXPECT_NEAR(pressing.max_penetration, deepest, 1e-9);
  EXPECT_NEAR(deepest, 0.008, 1e-9);
}

}  // namespace
