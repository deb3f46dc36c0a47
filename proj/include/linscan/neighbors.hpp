#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linscan/linalg.hpp"
#include "linscan/types.hpp"

namespace linscan {

/// Static 2-d tree over a point set answering exact k-nearest-neighbor and
/// closed-ball radius queries in Euclidean distance.
///
/// Results are identical to a brute-force scan: k-NN ties are broken by
/// ascending id and range results are returned in ascending id order.
class NeighborIndex {
 public:
  // Throws std::invalid_argument on an empty point set.
  explicit NeighborIndex(std::span<const Vec2> points);
  static NeighborIndex build(const PointCloud& cloud) { return NeighborIndex(cloud.points()); }

  std::size_t size() const { return points_.size(); }
  Vec2 point(PointId id) const { return points_[id]; }

  /// The k points nearest to point `query_id`, sorted by (distance, id).
  /// With include_self the query point itself is a candidate (and is
  /// first unless it has exact duplicates with smaller ids). Throws
  /// std::out_of_range if k exceeds the number of candidates.
  std::vector<PointId> knn(PointId query_id, std::size_t k, bool include_self = true) const;
  std::vector<PointId> knn(Vec2 query, std::size_t k) const;

  /// All ids with ||x_i - center|| <= radius, ascending.
  std::vector<PointId> range_query(PointId center_id, double radius) const;
  std::vector<PointId> range_query(Vec2 center, double radius) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t left = 0;   // child node indices; 0 means leaf
    std::size_t right = 0;
    Vec2 lo;
    Vec2 hi;
  };

  std::size_t build_node(std::size_t begin, std::size_t end);
  std::vector<PointId> knn_impl(Vec2 query, std::size_t k, PointId skip) const;

  std::vector<Vec2> points_;
  std::vector<PointId> perm_;
  std::vector<Node> nodes_;
};

}  // namespace linscan
