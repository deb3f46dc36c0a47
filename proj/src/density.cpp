#include "linscan/density.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <utility>

#include "linscan/indexed_heap.hpp"

namespace linscan {

std::vector<Neighbor> DistanceOracle::neighbors(PointId i, double eps) const {
  std::vector<Neighbor> out;
  const std::size_t n = size();
  for (PointId j = 0; j < n; ++j) {
    const double d = distance(i, j);
    if (d <= eps) out.push_back({j, d});
  }
  return out;
}

EuclideanOracle::EuclideanOracle(std::span<const Vec2> points) : index_(points) {}

double EuclideanOracle::distance(PointId i, PointId j) const {
  return norm(index_.point(i) - index_.point(j));
}

std::vector<Neighbor> EuclideanOracle::neighbors(PointId i, double eps) const {
  std::vector<Neighbor> out;
  const Vec2 center = index_.point(i);
  if (eps == kInf) {
    out.reserve(size());
    for (PointId j = 0; j < size(); ++j) out.push_back({j, norm(index_.point(j) - center)});
    return out;
  }
  for (PointId j : index_.range_query(center, eps)) {
    const double d = norm(index_.point(j) - center);
    if (d <= eps) out.push_back({j, d});
  }
  return out;
}

std::vector<double> OpticsResult::reach_plot() const {
  std::vector<double> plot(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) plot[pos] = reach[order[pos]];
  return plot;
}

namespace {

constexpr int kUnvisited = -2;

void check_min_pts(int min_pts) {
  if (min_pts < 1) throw std::invalid_argument("minPts must be at least 1");
}

// Demotes clusters with fewer than min_pts core members and renumbers the
// rest contiguously in their original order. Border points do not count, so
// the outcome does not depend on which cluster claimed a shared border.
Labeling drop_small_clusters(std::vector<int> raw, const std::vector<bool>& core, int min_pts) {
  int max_id = -1;
  for (int l : raw) max_id = std::max(max_id, l);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(max_id + 1), 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] >= 0 && core[i]) ++sizes[static_cast<std::size_t>(raw[i])];
  }
  for (int& l : raw) {
    if (l >= 0 && sizes[static_cast<std::size_t>(l)] < static_cast<std::size_t>(min_pts)) {
      l = Labeling::kNoise;
    }
  }
  return Labeling::compact(raw);
}

}  // namespace

std::vector<bool> core_points(const DistanceOracle& oracle, double eps, int min_pts) {
  std::vector<bool> core(oracle.size());
  for (PointId i = 0; i < oracle.size(); ++i) {
    core[i] = is_core_count(oracle.neighbors(i, eps).size(), min_pts);
  }
  return core;
}

Labeling dbscan(const DistanceOracle& oracle, double eps, int min_pts) {
  check_min_pts(min_pts);
  const std::size_t n = oracle.size();
  std::vector<int> labels(n, kUnvisited);
  std::vector<bool> core(n, false);
  int next_cluster = 0;

  for (PointId seed = 0; seed < n; ++seed) {
    if (labels[seed] != kUnvisited) continue;
    const std::vector<Neighbor> seed_nbrs = oracle.neighbors(seed, eps);
    if (!is_core_count(seed_nbrs.size(), min_pts)) {
      labels[seed] = Labeling::kNoise;
      continue;
    }
    const int cluster = next_cluster++;
    labels[seed] = cluster;
    core[seed] = true;
    std::deque<PointId> frontier;
    for (const Neighbor& nb : seed_nbrs) {
      if (labels[nb.id] == kUnvisited || labels[nb.id] == Labeling::kNoise) frontier.push_back(nb.id);
    }
    while (!frontier.empty()) {
      const PointId y = frontier.front();
      frontier.pop_front();
      if (labels[y] == Labeling::kNoise) {
        // Already known to be a non-core point: border of this cluster.
        labels[y] = cluster;
        continue;
      }
      if (labels[y] != kUnvisited) continue;
      labels[y] = cluster;
      const std::vector<Neighbor> nbrs = oracle.neighbors(y, eps);
      if (!is_core_count(nbrs.size(), min_pts)) continue;
      core[y] = true;
      for (const Neighbor& nb : nbrs) {
        if (labels[nb.id] == kUnvisited || labels[nb.id] == Labeling::kNoise) frontier.push_back(nb.id);
      }
    }
  }
  return drop_small_clusters(std::move(labels), core, min_pts);
}

OpticsResult optics(const DistanceOracle& oracle, double eps, int min_pts) {
  check_min_pts(min_pts);
  if (!(eps > 0.0)) throw std::invalid_argument("optics: eps must be positive (or inf)");
  const std::size_t n = oracle.size();
  OpticsResult result;
  result.order.reserve(n);
  result.reach.assign(n, kInf);
  result.core.assign(n, kInf);

  std::vector<bool> processed(n, false);
  IndexedMinHeap<std::pair<double, PointId>> seeds(n);
  std::vector<double> scratch;

  auto core_distance = [&](const std::vector<Neighbor>& nbrs) {
    if (!is_core_count(nbrs.size(), min_pts)) return kInf;
    scratch.resize(nbrs.size());
    std::transform(nbrs.begin(), nbrs.end(), scratch.begin(), [](const Neighbor& nb) { return nb.distance; });
    const auto kth = scratch.begin() + min_pts;
    std::nth_element(scratch.begin(), kth, scratch.end());
    return *kth;
  };

  auto process = [&](PointId p) {
    const std::vector<Neighbor> nbrs = oracle.neighbors(p, eps);
    processed[p] = true;
    result.order.push_back(p);
    const double core = core_distance(nbrs);
    result.core[p] = core;
    if (core == kInf) return;
    for (const Neighbor& o : nbrs) {
      if (processed[o.id]) continue;
      const double candidate = std::max(core, o.distance);
      if (!seeds.contains(o.id)) {
        result.reach[o.id] = candidate;
        seeds.push(o.id, {candidate, o.id});
      } else if (candidate < result.reach[o.id]) {
        result.reach[o.id] = candidate;
        seeds.decrease_key(o.id, {candidate, o.id});
      }
    }
  };

  for (PointId start = 0; start < n; ++start) {
    if (processed[start]) continue;
    process(start);
    while (!seeds.empty()) process(seeds.pop());
  }
  return result;
}

Labeling extract_dbscan(const OpticsResult& result, double eps_prime, int min_pts) {
  check_min_pts(min_pts);
  std::vector<int> labels(result.size(), Labeling::kNoise);
  std::vector<bool> core(result.size(), false);
  int current = Labeling::kNoise;
  int next_cluster = 0;
  for (PointId p : result.order) {
    core[p] = result.core[p] <= eps_prime;
    if (result.reach[p] > eps_prime) {
      if (result.core[p] <= eps_prime) {
        current = next_cluster++;
        labels[p] = current;
      } else {
        labels[p] = Labeling::kNoise;
      }
    } else {
      labels[p] = current;
    }
  }
  return drop_small_clusters(std::move(labels), core, min_pts);
}

namespace {

// Grows a steep region from `start`: consecutive steep points, allowing
// runs of at most min_pts points that are neither steep nor moving in the
// opposite direction. Returns the last steep position.
std::size_t extend_region(const std::vector<bool>& steep, const std::vector<bool>& backward,
                          std::size_t start, int min_pts) {
  std::size_t non_steep = 0;
  std::size_t end = start;
  for (std::size_t index = start; index < steep.size(); ++index) {
    if (steep[index]) {
      non_steep = 0;
      end = index;
    } else if (!backward[index]) {
      if (++non_steep > static_cast<std::size_t>(min_pts)) break;
    } else {
      return end;
    }
  }
  return end;
}

struct SteepDownArea {
  std::size_t start;
  std::size_t end;
  double mib;  // max reachability between the area and the current position
};

void filter_steep_down_areas(std::vector<SteepDownArea>& areas, double mib, double xi_complement,
                             const std::vector<double>& r) {
  if (mib == kInf) {
    areas.clear();
    return;
  }
  std::erase_if(areas, [&](const SteepDownArea& a) { return !(mib <= r[a.start] * xi_complement); });
  for (auto& a : areas) a.mib = std::max(a.mib, mib);
}

}  // namespace

std::vector<XiCluster> xi_clusters(std::span<const double> reach_plot, double xi, int min_pts) {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
  check_min_pts(min_pts);
  const std::size_t n = reach_plot.size();
  // A trailing infinity closes the last cluster.
  std::vector<double> r(reach_plot.begin(), reach_plot.end());
  r.push_back(kInf);
  const double xc = 1.0 - xi;

  std::vector<bool> steep_up(n), steep_down(n), upward(n), downward(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = r[i] / r[i + 1];  // NaN for inf/inf and 0/0: neither
    steep_up[i] = ratio <= xc;
    steep_down[i] = ratio >= 1.0 / xc;
    downward[i] = ratio > 1.0;
    upward[i] = ratio < 1.0;
  }

  std::vector<SteepDownArea> areas;
  std::vector<XiCluster> clusters;
  std::size_t index = 0;
  double mib = 0.0;

  for (std::size_t steep_index = 0; steep_index < n; ++steep_index) {
    if (!(steep_up[steep_index] || steep_down[steep_index])) continue;
    if (steep_index < index) continue;
    mib = std::max(mib, *std::max_element(r.begin() + index, r.begin() + steep_index + 1));

    if (steep_down[steep_index]) {
      filter_steep_down_areas(areas, mib, xc, r);
      const std::size_t end = extend_region(steep_down, upward, steep_index, min_pts);
      areas.push_back({steep_index, end, 0.0});
      index = end + 1;
      mib = r[index];
      continue;
    }

    filter_steep_down_areas(areas, mib, xc, r);
    const std::size_t up_start = steep_index;
    const std::size_t up_end = extend_region(steep_up, downward, up_start, min_pts);
    index = up_end + 1;
    mib = r[index];

    std::vector<XiCluster> found;
    for (const SteepDownArea& down : areas) {
      std::size_t c_start = down.start;
      std::size_t c_end = up_end;
      const double after = r[c_end + 1];
      if (after * xc < down.mib) continue;

      // Trim whichever side sits higher so both ends are at a similar level.
      const double down_max = r[down.start];
      if (down_max * xc >= after) {
        while (r[c_start + 1] > after && c_start < down.end) ++c_start;
      } else if (after * xc >= down_max) {
        while (c_end > up_start && r[c_end - 1] > down_max) --c_end;
      }

      if (c_end - c_start + 1 < static_cast<std::size_t>(min_pts)) continue;
      if (c_start > down.end) continue;
      if (c_end < up_start) continue;
      found.push_back({c_start, c_end});
    }
    clusters.insert(clusters.end(), found.rbegin(), found.rend());
  }
  return clusters;
}

Labeling extract_xi(const OpticsResult& result, double xi, int min_pts) {
  const std::vector<double> plot = result.reach_plot();
  const std::vector<XiCluster> clusters = xi_clusters(plot, xi, min_pts);

  // Clusters arrive innermost first; taking each one whose span is still
  // unlabeled keeps exactly the leaves.
  std::vector<int> by_position(plot.size(), Labeling::kNoise);
  int next = 0;
  for (const XiCluster& c : clusters) {
    const auto first = by_position.begin() + static_cast<std::ptrdiff_t>(c.start);
    const auto last = by_position.begin() + static_cast<std::ptrdiff_t>(c.end) + 1;
    if (std::all_of(first, last, [](int l) { return l == Labeling::kNoise; })) {
      std::fill(first, last, next++);
    }
  }
  std::vector<int> labels(plot.size(), Labeling::kNoise);
  for (std::size_t pos = 0; pos < plot.size(); ++pos) labels[result.order[pos]] = by_position[pos];
  return Labeling(std::move(labels));
}

}  // namespace linscan
