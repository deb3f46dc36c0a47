#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "linscan/neighbors.hpp"
#include "linscan/types.hpp"

namespace linscan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Neighbor {
  PointId id = 0;
  double distance = 0.0;
};

/// Symmetric nonnegative dissimilarity over ids 0..size()-1. The triangle
/// inequality is not assumed anywhere.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;

  virtual std::size_t size() const = 0;
  virtual double distance(PointId i, PointId j) const = 0;

  /// Every j with distance(i, j) <= eps (closed ball, i included), in
  /// ascending id order. The default is a brute-force scan.
  virtual std::vector<Neighbor> neighbors(PointId i, double eps) const;
};

/// Euclidean distance over a point set, with radius queries served by a
/// NeighborIndex.
class EuclideanOracle final : public DistanceOracle {
 public:
  explicit EuclideanOracle(std::span<const Vec2> points);
  explicit EuclideanOracle(const PointCloud& cloud) : EuclideanOracle(cloud.points()) {}

  std::size_t size() const override { return index_.size(); }
  double distance(PointId i, PointId j) const override;
  std::vector<Neighbor> neighbors(PointId i, double eps) const override;

 private:
  NeighborIndex index_;
};

/// Adapts any symmetric callable; neighborhoods by brute force.
class FunctionOracle final : public DistanceOracle {
 public:
  FunctionOracle(std::size_t n, std::function<double(PointId, PointId)> fn)
      : n_(n), fn_(std::move(fn)) {}

  std::size_t size() const override { return n_; }
  double distance(PointId i, PointId j) const override { return i == j ? 0.0 : fn_(i, j); }

 private:
  std::size_t n_;
  std::function<double(PointId, PointId)> fn_;
};

struct OpticsResult {
  std::vector<PointId> order;  // visit order, a permutation of ids
  std::vector<double> reach;   // indexed by id; kInf for component starts
  std::vector<double> core;    // indexed by id; kInf when not core within eps

  std::size_t size() const { return order.size(); }
  // Reachability in visit order (the reachability plot).
  std::vector<double> reach_plot() const;
};

// Strict core test: a point is core when its closed eps-neighborhood
// (itself included) holds more than min_pts points.
inline bool is_core_count(std::size_t neighborhood_size, int min_pts) {
  return neighborhood_size > static_cast<std::size_t>(min_pts);
}

/// DBSCAN over an arbitrary oracle. Seeds are taken in ascending id order
/// and clusters grow breadth-first, so a border point joins the first
/// cluster that reaches it. Clusters with fewer than min_pts core members are
/// demoted to noise.
Labeling dbscan(const DistanceOracle& oracle, double eps, int min_pts);

/// Per-point core flags under the strict core test.
std::vector<bool> core_points(const DistanceOracle& oracle, double eps, int min_pts);

/// OPTICS ordering. The core distance of p is the smallest radius at which
/// p passes the strict core test, i.e. the (min_pts+1)-th smallest
/// distance from p counting p itself, or kInf if that exceeds eps. The seed
/// queue is ordered by (reachability, id).
OpticsResult optics(const DistanceOracle& oracle, double eps, int min_pts);

/// Flat DBSCAN-equivalent clustering at eps_prime from an OPTICS result
/// computed with eps >= eps_prime. Clusters with fewer than min_pts core
/// members are noise.
Labeling extract_dbscan(const OpticsResult& result, double eps_prime, int min_pts);

// Closed interval [start, end] of positions in the reachability plot.
struct XiCluster {
  std::size_t start = 0;
  std::size_t end = 0;
};

/// Steep-area xi clusters of a reachability plot, smaller clusters before
/// the enclosing ones.
std::vector<XiCluster> xi_clusters(std::span<const double> reach_plot, double xi, int min_pts);

/// Flat labeling from xi extraction: the leaves of the cluster hierarchy
/// with at least min_pts members become clusters, everything else noise.
Labeling extract_xi(const OpticsResult& result, double xi, int min_pts);

}  // namespace linscan
