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

#include "ugcs/geom/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ugcs/common/error.hpp"

namespace ugcs::geom {

KdTree::KdTree(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
  std::vector<int> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree::build(std::vector<int>& idx, int begin, int end, int depth) {
  if (begin >= end) return -1;
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (int i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[idx[i]]);
    hi = hi.cwiseMax(points_[idx[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end, [&](int a, int b) {
    if (points_[a][axis] != points_[b][axis]) return points_[a][axis] < points_[b][axis];
    return a < b;
  });
  const int node = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], axis, -1, -1});
  const int left = build(idx, begin, mid, depth + 1);
  const int right = build(idx, mid + 1, end, depth + 1);
  nodes_[node].left = left;
  nodes_[node].right = right;
  return node;
}

KdTree::Match KdTree::nearest(const Eigen::Vector3d& q) const {
  if (root_ < 0) throw InvalidArgument("KdTree::nearest on empty tree");
  Match best{-1, std::numeric_limits<double>::infinity()};
  nearest(root_, q, best);
  return best;
}

void KdTree::nearest(int node_index, const Eigen::Vector3d& q, Match& best) const {
  if (node_index < 0) return;
  const Node& node = nodes_[node_index];
  const Eigen::Vector3d& p = points_[node.point];
  const double d2 = (p - q).squaredNorm();
  if (d2 < best.squared_distance || (d2 == best.squared_distance && node.point < best.index)) {
    best = {node.point, d2};
  }
  const double delta = q[node.axis] - p[node.axis];
  const int near = delta < 0.0 ? node.left : node.right;
  const int far = delta < 0.0 ? node.right : node.left;
  nearest(near, q, best);
  // Equality keeps the far side in play so lower-index ties are found.
  if (delta * delta <= best.squared_distance) nearest(far, q, best);
}

std::vector<int> KdTree::within(const Eigen::Vector3d& q, double radius) const {
  std::vector<int> out;
  if (root_ >= 0) within(root_, q, radius * radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

void KdTree::within(int node_index, const Eigen::Vector3d& q, double r2, std::vector<int>& out) const {
  if (node_index < 0) return;
  const Node& node = nodes_[node_index];
  const Eigen::Vector3d& p = points_[node.point];
  if ((p - q).squaredNorm() <= r2) out.push_back(node.point);
  const double delta = q[node.axis] - p[node.axis];
  if (delta <= 0.0 || delta * delta <= r2) within(node.left, q, r2, out);
  if (delta >= 0.0 || delta * delta <= r2) within(node.right, q, r2, out);
}

}  // namespace ugcs::geom
