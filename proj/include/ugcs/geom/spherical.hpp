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
#include <vector>

#include <Eigen/Core>

namespace ugcs::geom {

// Normalized spherical coordinate of the unified chart. Both components live
// in [0, 1): lambda maps longitude [-pi, pi) and phi maps latitude
// [-pi/2, pi/2). Longitude is measured with atan2(y, x) and latitude with
// asin(z). (0, 0) is the no-contact pole (-z); phi -> 1 is the palm pole (+z).
struct SphericalCoord {
  double lambda = 0.0;
  double phi = 0.0;

  friend bool operator==(const SphericalCoord&, const SphericalCoord&) = default;
};

inline constexpr SphericalCoord kNoContactCoord{0.0, 0.0};

// Largest representable normalized value strictly below 1.
double max_normalized();

double lambda_to_radians(double lambda);
double phi_to_radians(double phi);
double lambda_from_radians(double lambda_rad);
double phi_from_radians(double phi_rad);

// Throws InvalidArgument if |dir| deviates from 1 by more than 1e-6.
// Longitude collapses to 0 within 1e-9 rad of either pole.
SphericalCoord spherical_from_unit(const Eigen::Vector3d& dir);

Eigen::Vector3d unit_from_spherical(SphericalCoord c);

// Great-circle arc length in radians, in [0, pi].
double haversine(SphericalCoord a, SphericalCoord b);

// Deterministic Fibonacci lattice on the unit sphere. Throws on count == 0.
std::vector<Eigen::Vector3d> fibonacci_directions(std::size_t count);

}  // namespace ugcs::geom
