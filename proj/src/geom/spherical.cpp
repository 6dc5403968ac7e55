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

#include "ugcs/geom/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ugcs/common/error.hpp"

namespace ugcs::geom {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleTolerance = 1e-9;

double clamp_unit_interval(double v) {
  if (v < 0.0) return 0.0;
  if (v >= 1.0) return max_normalized();
  return v;
}

}  // namespace

double max_normalized() { return std::nextafter(1.0, 0.0); }

double lambda_to_radians(double lambda) { return kTwoPi * lambda - kPi; }
double phi_to_radians(double phi) { return kPi * phi - 0.5 * kPi; }

double lambda_from_radians(double lambda_rad) {
  double v = (lambda_rad + kPi) / kTwoPi;
  v -= std::floor(v);
  // floor can leave exactly 1.0 for inputs a hair below a multiple of 2*pi.
  return v >= 1.0 ? 0.0 : v;
}

double phi_from_radians(double phi_rad) {
  return clamp_unit_interval((phi_rad + 0.5 * kPi) / kPi);
}

SphericalCoord spherical_from_unit(const Eigen::Vector3d& dir) {
  const double norm = dir.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
    throw InvalidArgument("spherical_from_unit: direction is not unit length");
  }
  const Eigen::Vector3d d = dir / norm;
  const double phi_rad = std::asin(std::clamp(d.z(), -1.0, 1.0));
  SphericalCoord c;
  c.phi = phi_from_radians(phi_rad);
  if (std::abs(phi_rad) >= 0.5 * kPi - kPoleTolerance) {
    c.lambda = 0.0;
  } else {
    c.lambda = lambda_from_radians(std::atan2(d.y(), d.x()));
  }
  return c;
}

Eigen::Vector3d unit_from_spherical(SphericalCoord c) {
  const double lam = lambda_to_radians(c.lambda);
  const double phi = phi_to_radians(c.phi);
  const double cp = std::cos(phi);
  return {cp * std::cos(lam), cp * std::sin(lam), std::sin(phi)};
}

double haversine(SphericalCoord a, SphericalCoord b) {
  const double lam1 = lambda_to_radians(a.lambda);
  const double lam2 = lambda_to_radians(b.lambda);
  const double phi1 = phi_to_radians(a.phi);
  const double phi2 = phi_to_radians(b.phi);
  const double s_phi = std::sin(0.5 * (phi2 - phi1));
  const double s_lam = std::sin(0.5 * (lam2 - lam1));
  double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lam * s_lam;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(h));
}

std::vector<Eigen::Vector3d> fibonacci_directions(std::size_t count) {
  if (count == 0) throw InvalidArgument("fibonacci_directions: count must be positive");
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Eigen::Vector3d> dirs;
  dirs.reserve(count);
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden_angle * static_cast<double>(i);
    Eigen::Vector3d d(r * std::cos(theta), r * std::sin(theta), z);
    dirs.push_back(d.normalized());
  }
  return dirs;
}

}  // namespace ugcs::geom
