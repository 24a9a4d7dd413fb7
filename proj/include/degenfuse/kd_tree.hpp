#pragma once

#include "degenfuse/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace degenfuse {

/// Static kd-tree over a point snapshot (2D or 3D). Immutable after
/// construction, so concurrent read queries are safe. Point ids are the
/// indices of the input vector.
///
/// Query contracts:
///  - nearest: minimum Euclidean distance, ties broken by smallest id
///  - radius:  strictly-less-than radius, results sorted by id
template <int Dim>
class KdTree {
  static_assert(Dim == 2 || Dim == 3);

 public:
  using PointT = std::array<double, Dim>;

  struct Hit {
    int id = -1;
    double distance = 0.0;
  };

  KdTree() = default;

  explicit KdTree(std::vector<PointT> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
      for (double c : p) {
        if (!std::isfinite(c)) throw ValidationError("KdTree: non-finite coordinate");
      }
    }
    index_.resize(points_.size());
    std::iota(index_.begin(), index_.end(), 0);
    if (!points_.empty()) {
      nodes_.reserve(points_.size());
      root_ = build(0, static_cast<int>(points_.size()), 0);
    }
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<PointT>& points() const { return points_; }

  std::optional<Hit> nearest(const PointT& query) const {
    if (empty()) return std::nullopt;
    Best best;
    search_nearest(root_, query, best);
    return Hit{best.id, std::sqrt(best.d2)};
  }

  /// All points with distance < radius (strict), sorted by id.
  std::vector<Hit> radius(const PointT& query, double radius) const {
    if (radius <= 0.0) throw ValidationError("KdTree: radius must be > 0");
    std::vector<Hit> hits;
    if (!empty()) search_radius(root_, query, radius * radius, hits);
    std::sort(hits.begin(), hits.end(),
              [](const Hit& a, const Hit& b) { return a.id < b.id; });
    return hits;
  }

 private:
  struct Node {
    int point = -1;   // id at this node
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    int id = -1;
  };

  int build(int begin, int end, int depth) {
    if (begin >= end) return -1;
    const int axis = depth % Dim;
    const int mid = begin + (end - begin) / 2;
    std::nth_element(index_.begin() + begin, index_.begin() + mid,
                     index_.begin() + end, [&](int a, int b) {
                       if (points_[a][axis] != points_[b][axis])
                         return points_[a][axis] < points_[b][axis];
                       return a < b;
                     });
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{index_[mid], axis, -1, -1});
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid + 1, end, depth + 1);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
  }

  static double dist2(const PointT& a, const PointT& b) {
    double s = 0.0;
    for (int k = 0; k < Dim; ++k) {
      const double d = a[k] - b[k];
      s += d * d;
    }
    return s;
  }

  void consider(int id, const PointT& query, Best& best) const {
    const double d2 = dist2(points_[id], query);
    if (d2 < best.d2 || (d2 == best.d2 && id < best.id)) {
      best.d2 = d2;
      best.id = id;
    }
  }

  void search_nearest(int node_id, const PointT& query, Best& best) const {
    if (node_id < 0) return;
    const Node& node = nodes_[node_id];
    consider(node.point, query, best);
    const double gap = query[node.axis] - points_[node.point][node.axis];
    const int near = gap < 0.0 ? node.left : node.right;
    const int far = gap < 0.0 ? node.right : node.left;
    search_nearest(near, query, best);
    // <= so an equal-distance point on the far side can still win a tie on id
    if (gap * gap <= best.d2) search_nearest(far, query, best);
  }

  void search_radius(int node_id, const PointT& query, double r2,
                     std::vector<Hit>& hits) const {
    if (node_id < 0) return;
    const Node& node = nodes_[node_id];
    const double d2 = dist2(points_[node.point], query);
    if (d2 < r2) hits.push_back(Hit{node.point, std::sqrt(d2)});
    const double gap = query[node.axis] - points_[node.point][node.axis];
    const int near = gap < 0.0 ? node.left : node.right;
    const int far = gap < 0.0 ? node.right : node.left;
    search_radius(near, query, r2, hits);
    if (gap * gap < r2) search_radius(far, query, r2, hits);
  }

  std::vector<PointT> points_;
  std::vector<int> index_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

using KdTree2 = KdTree<2>;
using KdTree3 = KdTree<3>;

inline KdTree3 build_index(const std::vector<Point3>& pts) {
  std::vector<std::array<double, 3>> raw;
  raw.reserve(pts.size());
  for (const auto& p : pts) raw.push_back({p.x, p.y, p.z});
  return KdTree3(std::move(raw));
}

inline KdTree2 build_index(const std::vector<Point2>& pts) {
  std::vector<std::array<double, 2>> raw;
  raw.reserve(pts.size());
  for (const auto& p : pts) raw.push_back({p.x, p.y});
  return KdTree2(std::move(raw));
}

}  // namespace degenfuse
