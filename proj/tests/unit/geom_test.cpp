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

#include <cmath>
#include <random>
#include <sstream>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "ugcs/common/error.hpp"
#include "ugcs/geom/kdtree.hpp"
#include "ugcs/geom/mesh.hpp"
#include "ugcs/geom/mesh_io.hpp"
#include "ugcs/geom/primitives.hpp"
#include "ugcs/geom/spherical.hpp"
#include "ugcs/kinematics/kinematics.hpp"

namespace {

using Eigen::Vector3d;
using ugcs::geom::SphericalCoord;
namespace geom = ugcs::geom;
namespace ut = ugcs::testing;

geom::TriMesh unit_cube() { return geom::make_box(Vector3d::Constant(-0.5), Vector3d::Constant(0.5)); }

// Every link mesh of the parallel jaw posed at its capture grasp, merged.
geom::TriMesh posed_gripper_mesh() {
  const auto& b = ut::bundle("parallel_jaw");
  const auto state = ugcs::kin::forward_kinematics(b.model, b.fit.capture_config);
  std::vector<geom::TriMesh> parts;
  for (std::size_t l = 0; l < b.model.links().size(); ++l) {
    if (b.model.links()[l].mesh) parts.push_back(b.model.links()[l].mesh->transformed(state.links[l]));
  }
  return geom::TriMesh::merge(parts);
}

Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Vector3d(g(rng), g(rng), g(rng)).normalized();
}

TEST(Spherical, CardinalDirections) {
  const SphericalCoord x = geom::spherical_from_unit(Vector3d::UnitX());
  EXPECT_DOUBLE_EQ(x.lambda, 0.5);
  EXPECT_DOUBLE_EQ(x.phi, 0.5);

  const SphericalCoord z = geom::spherical_from_unit(Vector3d::UnitZ());
  EXPECT_EQ(z.lambda, 0.0);
  EXPECT_EQ(z.phi, geom::max_normalized());
  EXPECT_LT(z.phi, 1.0);

  const SphericalCoord y = geom::spherical_from_unit(Vector3d::UnitY());
  EXPECT_NEAR(y.lambda, 0.75, 1e-15);
  EXPECT_NEAR(y.phi, 0.5, 1e-15);

  const SphericalCoord south = geom::spherical_from_unit(-Vector3d::UnitZ());
  EXPECT_EQ(south, geom::kNoContactCoord);
}

TEST(Spherical, InverseExamples) {
  EXPECT_NEAR((geom::unit_from_spherical({0.5, 0.5}) - Vector3d::UnitX()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((geom::unit_from_spherical({0.0, 0.0}) + Vector3d::UnitZ()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((geom::unit_from_spherical({0.75, 0.5}) - Vector3d::UnitY()).norm(), 0.0, 1e-15);
}

TEST(Spherical, RejectsNonUnitDirection) {
  EXPECT_THROW(geom::spherical_from_unit(Vector3d(2.0, 0.0, 0.0)), ugcs::InvalidArgument);
  EXPECT_NO_THROW(geom::spherical_from_unit(Vector3d(1.0 + 5e-7, 0.0, 0.0)));
}

TEST(Spherical, NormalizedRangeAndRadianRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const SphericalCoord c = geom::spherical_from_unit(random_unit(rng));
    EXPECT_GE(c.lambda, 0.0);
    EXPECT_LT(c.lambda, 1.0);
    EXPECT_GE(c.phi, 0.0);
    EXPECT_LT(c.phi, 1.0);

    const double l = u(rng);
    const double p = u(rng);
    const double l_rad = geom::lambda_to_radians(l);
    const double p_rad = geom::phi_to_radians(p);
    EXPECT_GE(l_rad, -M_PI);
    EXPECT_LT(l_rad, M_PI);
    EXPECT_GE(p_rad, -M_PI / 2);
    EXPECT_LT(p_rad, M_PI / 2);
    EXPECT_NEAR(geom::lambda_from_radians(l_rad), l, 1e-12);
    EXPECT_NEAR(geom::phi_from_radians(p_rad), p, 1e-12);
  }
}

TEST(Spherical, UnitRoundTripAwayFromPoles) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Vector3d d = random_unit(rng);
    if (std::abs(d.z()) > 0.999) continue;
    EXPECT_LT((geom::unit_from_spherical(geom::spherical_from_unit(d)) - d).norm(), 1e-9);
  }
}

TEST(Spherical, PoleCanonicalization) {
  const SphericalCoord a = geom::spherical_from_unit(Vector3d(1e-12, 0.0, 1.0).normalized());
  const SphericalCoord b = geom::spherical_from_unit(Vector3d(0.0, -1e-12, 1.0).normalized());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.lambda, 0.0);
}

TEST(Haversine, Examples) {
  EXPECT_EQ(geom::haversine({0.5, 0.5}, {0.5, 0.5}), 0.0);
  EXPECT_NEAR(geom::haversine({0.5, 0.5}, {0.0, 0.5}), M_PI, 1e-12);
  EXPECT_NEAR(geom::haversine({0.5, 0.5}, {0.75, 0.5}), M_PI / 2, 1e-12);
}

TEST(Haversine, MetricPropertiesOnRandomTriples) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const SphericalCoord a{u(rng), u(rng)};
    const SphericalCoord b{u(rng), u(rng)};
    const SphericalCoord c{u(rng), u(rng)};
    const double ab = geom::haversine(a, b);
    EXPECT_EQ(ab, geom::haversine(b, a));
    EXPECT_LE(ab, geom::haversine(a, c) + geom::haversine(c, b) + 1e-9);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, M_PI);
    EXPECT_EQ(geom::haversine(a, a), 0.0);
    EXPECT_NEAR(ab, ut::arc_between(a, b), 1e-9);
    if (ab == 0.0) {
      EXPECT_EQ(a, b);
    }
  }
  // Distinct representations of the same pole collapse to one point.
  const SphericalCoord north_a = geom::spherical_from_unit(Vector3d(0, 0, 1));
  const SphericalCoord north_b = geom::spherical_from_unit(Vector3d(1e-13, 1e-13, 1).normalized());
  EXPECT_EQ(geom::haversine(north_a, north_b), 0.0);
  EXPECT_EQ(north_a, north_b);
}

TEST(Fibonacci, CountAndUniformity) {
  const auto one = geom::fibonacci_directions(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].norm(), 1.0, 1e-12);

  const auto thousand = geom::fibonacci_directions(1000);
  double min_angle = M_PI;
  for (std::size_t i = 0; i < thousand.size(); ++i) {
    for (std::size_t j = i + 1; j < thousand.size(); ++j) {
      min_angle = std::min(min_angle, std::acos(std::clamp(thousand[i].dot(thousand[j]), -1.0, 1.0)));
    }
  }
  EXPECT_GT(min_angle, 0.0);

  const auto many = geom::fibonacci_directions(10000);
  Vector3d mean = Vector3d::Zero();
  for (const auto& d : many) {
    EXPECT_NEAR(d.norm(), 1.0, 1e-12);
    mean += d;
  }
  EXPECT_LT((mean / 10000.0).norm(), 0.01);

  EXPECT_THROW(geom::fibonacci_directions(0), ugcs::InvalidArgument);
  EXPECT_EQ(geom::fibonacci_directions(777), geom::fibonacci_directions(777));
}

TEST(RayCast, CubeExamples) {
  const geom::TriMesh cube = unit_cube();
  const auto hit = geom::ray_intersect_first(cube, Vector3d::Zero(), Vector3d::UnitX());
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR((hit->point - Vector3d(0.5, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(hit->distance, 0.5, 1e-15);
  EXPECT_FALSE(geom::ray_intersect_first(cube, Vector3d(0, 0, 2), Vector3d::UnitZ()).has_value());
}

TEST(RayCast, IcosphereTessellationBound) {
  const geom::TriMesh sphere = geom::make_icosphere(1.0, 3);
  // Smallest distance from the center to any triangle bounds every hit from below.
  double nearest_plane = 1.0;
  for (std::size_t t = 0; t < sphere.triangles().size(); ++t) {
    const Vector3d& v0 = sphere.vertices()[sphere.triangles()[t][0]];
    nearest_plane = std::min(nearest_plane, std::abs(v0.dot(sphere.face_normals()[t])));
  }
  const double bound = 1.0 - nearest_plane;
  ASSERT_LT(bound, 0.01);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 500; ++i) {
    const auto hit = geom::ray_intersect_first(sphere, Vector3d::Zero(), random_unit(rng));
    ASSERT_TRUE(hit.has_value());
    EXPECT_GE(hit->distance, 1.0 - bound - 1e-12);
    EXPECT_LE(hit->distance, 1.0 + 1e-12);
    EXPECT_NEAR(hit->distance, 1.0, 0.01);
  }
}

void expect_rays_match_brute_force(const geom::TriMesh& mesh, std::uint64_t seed) {
  ASSERT_LE(mesh.triangles().size(), 10000u);
  std::mt19937_64 rng(seed);
  const Vector3d lo = mesh.bounds().min;
  const Vector3d hi = mesh.bounds().max;
  const Vector3d pad = 0.25 * (hi - lo);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    Vector3d origin;
    for (int k = 0; k < 3; ++k) origin[k] = lo[k] - pad[k] + u(rng) * (hi[k] - lo[k] + 2 * pad[k]);
    const Vector3d dir = random_unit(rng);
    const auto fast = geom::ray_intersect_first(mesh, origin, dir);
    const auto slow = ut::brute_ray(mesh, origin, dir);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "ray " << i;
    if (!fast) continue;
    ++hits;
    EXPECT_TRUE(fast->triangle_index == slow->triangle || std::abs(fast->distance - slow->distance) <= 1e-9)
        << "ray " << i;
    EXPECT_NEAR(fast->distance, slow->distance, 1e-9);
  }
  EXPECT_GT(hits, 100);
}

void expect_distances_match_brute_force(const geom::TriMesh& mesh, std::uint64_t seed, bool check_sign) {
  ASSERT_LE(mesh.triangles().size(), 10000u);
  std::mt19937_64 rng(seed);
  const Vector3d lo = mesh.bounds().min;
  const Vector3d hi = mesh.bounds().max;
  const Vector3d pad = 0.5 * (hi - lo);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Vector3d p;
    for (int k = 0; k < 3; ++k) p[k] = lo[k] - pad[k] + u(rng) * (hi[k] - lo[k] + 2 * pad[k]);
    const auto sd = geom::signed_distance(mesh, p);
    const double expected = ut::brute_distance(mesh, p);
    EXPECT_NEAR(std::abs(sd.value), expected, 1e-9) << "query " << i;
    EXPECT_NEAR(geom::closest_point(mesh, p).distance, expected, 1e-9);
    if (check_sign && expected > 1e-6) {
      EXPECT_EQ(sd.value < 0.0, ut::brute_inside(mesh, p)) << "query " << i;
    }
  }
}

TEST(OracleSuite, BundledBoxMesh) {
  const geom::TriMesh box = geom::load_mesh(ut::asset("meshes/box.obj"));
  ASSERT_TRUE(box.watertight());
  expect_rays_match_brute_force(box, 21);
  expect_distances_match_brute_force(box, 22, true);
}

TEST(OracleSuite, Icosphere) {
  const geom::TriMesh sphere = geom::make_icosphere(0.05, 4);
  expect_rays_match_brute_force(sphere, 23);
  expect_distances_match_brute_force(sphere, 24, true);
}

TEST(OracleSuite, PosedGripperLinks) {
  const geom::TriMesh mesh = posed_gripper_mesh();
  expect_rays_match_brute_force(mesh, 25);
  expect_distances_match_brute_force(mesh, 26, false);
}

TEST(SignedDistance, CubeExamples) {
  const geom::TriMesh cube = unit_cube();
  EXPECT_NEAR(geom::signed_distance(cube, Vector3d::Zero()).value, -0.5, 1e-15);
  EXPECT_NEAR(geom::signed_distance(cube, Vector3d(1, 0, 0)).value, 0.5, 1e-15);
  EXPECT_TRUE(geom::signed_distance(cube, Vector3d::Zero()).sign_reliable);
  // Edge and corner regions exercise the pseudo-normal sign.
  EXPECT_NEAR(geom::signed_distance(cube, Vector3d(1, 1, 0)).value, std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(geom::signed_distance(cube, Vector3d(1, 1, 1)).value, std::sqrt(0.75), 1e-12);
  EXPECT_NEAR(geom::signed_distance(cube, Vector3d(0.49, 0.49, 0.49)).value, -0.01, 1e-12);
}

TEST(SignedDistance, IcosphereInterior) {
  const geom::TriMesh sphere = geom::make_icosphere(1.0, 3);
  const Vector3d p(0, 0, 0.5);
  const double sd = geom::signed_distance(sphere, p).value;
  EXPECT_NEAR(sd, -ut::brute_distance(sphere, p), 1e-9);
  EXPECT_NEAR(sd, -0.5, 0.01);
}

TEST(SignedDistance, OpenMeshFlagsUnreliableSign) {
  const geom::TriMesh cube = unit_cube();
  std::vector<std::array<int, 3>> tris(cube.triangles().begin(), cube.triangles().end() - 1);
  const geom::TriMesh open(cube.vertices(), tris);
  EXPECT_FALSE(open.watertight());
  EXPECT_FALSE(geom::signed_distance(open, Vector3d::Zero()).sign_reliable);
}

TEST(Mesh, DropsDegenerateTriangles) {
  std::vector<Vector3d> v = {Vector3d(0, 0, 0), Vector3d(1, 0, 0), Vector3d(0, 1, 0), Vector3d(2, 0, 0)};
  const geom::TriMesh mesh(v, {{0, 1, 2}, {0, 1, 3}});
  EXPECT_EQ(mesh.triangles().size(), 1u);
  EXPECT_EQ(mesh.dropped_degenerates(), 1u);
  EXPECT_THROW(geom::TriMesh(v, {{0, 1, 7}}), ugcs::InvalidArgument);
  EXPECT_THROW(geom::closest_point(geom::TriMesh(), Vector3d::Zero()), ugcs::InvalidArgument);
}

TEST(MeshIo, ObjQuadsAndNegativeIndices) {
  std::istringstream in(
      "# quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1 4//1\nf -4 -3 -1\n");
  const geom::TriMesh mesh = geom::read_obj(in);
  EXPECT_EQ(mesh.vertices().size(), 4u);
  EXPECT_EQ(mesh.triangles().size(), 3u);
}

TEST(MeshIo, MalformedInputs) {
  std::istringstream bad_vertex("v 0 0\n");
  EXPECT_THROW(geom::read_obj(bad_vertex), ugcs::ParseError);
  std::istringstream bad_index("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
  EXPECT_THROW(geom::read_obj(bad_index), ugcs::ParseError);
  std::istringstream no_magic("plx\n");
  EXPECT_THROW(geom::read_ply(no_magic), ugcs::ParseError);
  try {
    geom::load_mesh("/nonexistent/mesh.obj");
    FAIL();
  } catch (const ugcs::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("file not found"), std::string::npos);
  }
}

TEST(MeshIo, PlyAsciiAndBinaryAgree) {
  const std::string header =
      "element vertex 4\nproperty float x\nproperty float y\nproperty float z\n"
      "element face 2\nproperty list uchar int vertex_indices\nend_header\n";
  std::istringstream ascii("ply\nformat ascii 1.0\n" + header + "0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n");
  const geom::TriMesh a = geom::read_ply(ascii);

  std::string binary = "ply\nformat binary_little_endian 1.0\n" + header;
  const float verts[12] = {0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0};
  binary.append(reinterpret_cast<const char*>(verts), sizeof(verts));
  for (const auto& f : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 2, 3}}) {
    binary.push_back(3);
    binary.append(reinterpret_cast<const char*>(f.data()), sizeof(int) * 3);
  }
  std::istringstream bin(binary);
  const geom::TriMesh b = geom::read_ply(bin);
  ASSERT_EQ(a.triangles(), b.triangles());
  ASSERT_EQ(a.vertices().size(), b.vertices().size());
  for (std::size_t i = 0; i < a.vertices().size(); ++i) EXPECT_EQ(a.vertices()[i], b.vertices()[i]);
}

TEST(MeshIo, ObjWriteReadRoundTrip) {
  const geom::TriMesh sphere = geom::make_icosphere(0.3, 2);
  std::stringstream buf;
  geom::write_obj(sphere, buf);
  const geom::TriMesh back = geom::read_obj(buf);
  ASSERT_EQ(back.triangles(), sphere.triangles());
  for (std::size_t i = 0; i < sphere.vertices().size(); ++i) EXPECT_EQ(back.vertices()[i], sphere.vertices()[i]);
}

TEST(KdTree, MatchesLinearScanWithLowestIndexTies) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> grid(0, 9);
  std::vector<Vector3d> pts;
  // Coarse integer lattice with duplicates forces many exact ties.
  for (int i = 0; i < 2000; ++i) pts.emplace_back(grid(rng), grid(rng), grid(rng));
  const geom::KdTree tree(pts);
  std::uniform_real_distribution<double> u(-1.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const Vector3d q = (i % 2) ? Vector3d(u(rng), u(rng), u(rng)) : Vector3d(grid(rng), grid(rng), grid(rng));
    EXPECT_EQ(tree.nearest(q).index, ut::brute_nearest(pts, q));
  }
  const auto within = tree.within(Vector3d(5, 5, 5), 1.0);
  std::vector<int> expected;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if ((pts[i] - Vector3d(5, 5, 5)).norm() <= 1.0) expected.push_back(static_cast<int>(i));
  }
  EXPECT_EQ(within, expected);
  EXPECT_THROW(geom::KdTree().nearest(Vector3d::Zero()), ugcs::InvalidArgument);
}

TEST(Sampling, AreaWeightedAndDeterministic) {
  const geom::TriMesh box = geom::make_box(Vector3d(0, 0, 0), Vector3d(3, 1, 1));
  const auto a = geom::sample_surface(box, 20000, 5);
  const auto b = geom::sample_surface(box, 20000, 5);
  ASSERT_EQ(a.points, b.points);
  // The two 3x1 faces at z = 0 and z = 1 hold 6/14 of the area.
  int on_z = 0;
  for (const auto& p : a.points) {
    if (std::abs(p.z()) < 1e-12 || std::abs(p.z() - 1.0) < 1e-12) ++on_z;
    EXPECT_LT(ut::brute_distance(box, p), 1e-12);
  }
  EXPECT_NEAR(on_z / 20000.0, 6.0 / 14.0, 0.015);
}

}  // namespace
