#include "linscan/neighbors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace linscan {
namespace {

constexpr std::size_t kLeafSize = 8;
constexpr PointId kNoSkip = std::numeric_limits<PointId>::max();

double box_distance2(Vec2 q, Vec2 lo, Vec2 hi) {
  const double dx = q.x < lo.x ? lo.x - q.x : (q.x > hi.x ? q.x - hi.x : 0.0);
  const double dy = q.y < lo.y ? lo.y - q.y : (q.y > hi.y ? q.y - hi.y : 0.0);
  return dx * dx + dy * dy;
}

}  // namespace

NeighborIndex::NeighborIndex(std::span<const Vec2> points)
    : points_(points.begin(), points.end()), perm_(points.size()) {
  if (points_.empty()) throw std::invalid_argument("NeighborIndex: empty point set");
  std::iota(perm_.begin(), perm_.end(), PointId{0});
  nodes_.reserve(2 * (points_.size() / kLeafSize + 1));
  build_node(0, points_.size());
}

std::size_t NeighborIndex::build_node(std::size_t begin, std::size_t end) {
  const std::size_t index = nodes_.size();
  nodes_.emplace_back();

  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (std::size_t i = begin; i < end; ++i) {
    const Vec2 p = points_[perm_[i]];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }

  std::size_t left = 0;
  std::size_t right = 0;
  if (end - begin > kLeafSize) {
    const bool split_x = (hi.x - lo.x) >= (hi.y - lo.y);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](PointId a, PointId b) {
                       const double ka = split_x ? points_[a].x : points_[a].y;
                       const double kb = split_x ? points_[b].x : points_[b].y;
                       return ka < kb || (ka == kb && a < b);
                     });
    left = build_node(begin, mid);
    right = build_node(mid, end);
  }
  nodes_[index] = Node{begin, end, left, right, lo, hi};
  return index;
}

std::vector<PointId> NeighborIndex::knn_impl(Vec2 query, std::size_t k, PointId skip) const {
  const std::size_t candidates = points_.size() - (skip == kNoSkip ? 0 : 1);
  if (k > candidates) throw std::out_of_range("knn: k exceeds the number of points");
  if (k == 0) return {};

  using Entry = std::pair<double, PointId>;  // (squared distance, id), max-heap
  std::priority_queue<Entry> best;

  // Depth-first, nearer child first.
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (best.size() == k && box_distance2(query, node.lo, node.hi) > best.top().first) continue;
    if (node.left == 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const PointId id = perm_[i];
        if (id == skip) continue;
        const Entry e{squared_norm(points_[id] - query), id};
        if (best.size() < k) {
          best.push(e);
        } else if (e < best.top()) {
          best.pop();
          best.push(e);
        }
      }
      continue;
    }
    const Node& l = nodes_[node.left];
    const Node& r = nodes_[node.right];
    const bool left_first = box_distance2(query, l.lo, l.hi) <= box_distance2(query, r.lo, r.hi);
    stack.push_back(left_first ? node.right : node.left);
    stack.push_back(left_first ? node.left : node.right);
  }

  std::vector<PointId> out(best.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = best.top().second;
    best.pop();
  }
  return out;
}

std::vector<PointId> NeighborIndex::knn(PointId query_id, std::size_t k, bool include_self) const {
  return knn_impl(points_.at(query_id), k, include_self ? kNoSkip : query_id);
}

std::vector<PointId> NeighborIndex::knn(Vec2 query, std::size_t k) const {
  return knn_impl(query, k, kNoSkip);
}

std::vector<PointId> NeighborIndex::range_query(PointId center_id, double radius) const {
  return range_query(points_.at(center_id), radius);
}

std::vector<PointId> NeighborIndex::range_query(Vec2 center, double radius) const {
  std::vector<PointId> out;
  if (!(radius >= 0.0)) return out;
  const double r2 = radius * radius;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(center, node.lo, node.hi) > r2) continue;
    if (node.left == 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const PointId id = perm_[i];
        if (squared_norm(points_[id] - center) <= r2) out.push_back(id);
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace linscan
