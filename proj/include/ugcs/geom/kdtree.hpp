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

#include <vector>

#include <Eigen/Core>

namespace ugcs::geom {

// Static 3-d tree for exact nearest-neighbour queries. Equal distances
// resolve to the lowest point index so results match a linear scan.
class KdTree {
 public:
  struct Match {
    int index = -1;
    double squared_distance = 0.0;
  };

  KdTree() = default;
  explicit KdTree(std::vector<Eigen::Vector3d> points);

  const std::vector<Eigen::Vector3d>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

  // Throws InvalidArgument on an empty tree.
  Match nearest(const Eigen::Vector3d& q) const;

  // All indices within `radius` (inclusive), ascending.
  std::vector<int> within(const Eigen::Vector3d& q, double radius) const;

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };
  int build(std::vector<int>& idx, int begin, int end, int depth);
  void nearest(int node, const Eigen::Vector3d& q, Match& best) const;
  void within(int node, const Eigen::Vector3d& q, double r2, std::vector<int>& out) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace ugcs::geom
