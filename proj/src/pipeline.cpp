#include "linscan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "linscan/divergence.hpp"

namespace linscan {
namespace {

// Candidate radius slightly above eps/sqrt2 so rounding in the bound never
// drops a pair whose exact distance is within eps.
constexpr double kPruneSlack = 1.0 + 1e-9;

double fold_degrees(double radians) {
  double deg = std::fmod(radians * 180.0 / std::numbers::pi, 180.0);
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  return deg == 0.0 ? 0.0 : deg;  // no -0
}

}  // namespace

GaussianOracle::GaussianOracle(std::span<const GaussianEmbedding> embeddings, bool prune)
    : embeddings_(embeddings) {
  if (prune && !embeddings_.empty()) {
    means_.reserve(embeddings_.size());
    for (const auto& e : embeddings_) means_.push_back(e.mu());
    mean_index_.emplace(means_);
  }
}

double GaussianOracle::distance(PointId i, PointId j) const {
  return i == j ? 0.0 : dist(embeddings_[i], embeddings_[j]);
}

std::vector<Neighbor> GaussianOracle::neighbors(PointId i, double eps) const {
  if (!mean_index_ || eps == kInf) return DistanceOracle::neighbors(i, eps);
  std::vector<Neighbor> out;
  const double radius = eps * (1.0 / std::numbers::sqrt2) * kPruneSlack;
  for (PointId j : mean_index_->range_query(embeddings_[i].mu(), radius)) {
    const double d = distance(i, j);
    if (d <= eps) out.push_back({j, d});
  }
  return out;
}

LinscanResult linscan(const PointCloud& cloud, const LinscanParams& params,
                      const LinscanOptions& options) {
  params.validate();
  const auto needed = static_cast<std::size_t>(std::max(params.ecc_pts, params.min_pts));
  if (cloud.size() < needed) {
    throw std::invalid_argument("linscan: cloud has " + std::to_string(cloud.size()) +
                                " points, needs at least max(eccPts, minPts) = " +
                                std::to_string(needed));
  }
  const NeighborIndex index = NeighborIndex::build(cloud);
  LinscanResult result;
  result.embeddings =
      embed_all(cloud, index, static_cast<std::size_t>(params.ecc_pts), options.embedding);
  const GaussianOracle oracle(result.embeddings, options.prune);
  result.optics = optics(oracle, params.eps, params.min_pts);
  // Embedding i belongs to point i, so the labels transfer unchanged.
  result.labels = extract_xi(result.optics, params.xi, params.min_pts);
  return result;
}

double cluster_orientation(std::span<const Vec2> points) {
  if (points.size() < 2) throw std::domain_error("cluster_orientation: needs at least two points");
  const EigenSym2 e = eig_sym2(sample_moments(points).covariance);
  if (!(e.lambda1 > 0.0)) throw std::domain_error("cluster_orientation: all points identical");
  return fold_degrees(std::atan2(e.v1.y, e.v1.x));
}

FilterResult spectral_filter(const PointCloud& cloud, const Labeling& labeling, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("spectral_filter: tau must lie in (0, 1]");
  if (labeling.size() != cloud.size()) throw std::invalid_argument("spectral_filter: size mismatch");

  const int k = labeling.num_clusters();
  std::vector<std::vector<Vec2>> members(static_cast<std::size_t>(k));
  for (PointId i = 0; i < cloud.size(); ++i) {
    if (!labeling.is_noise(i)) members[static_cast<std::size_t>(labeling[i])].push_back(cloud[i]);
  }

  FilterResult out;
  out.summaries.resize(static_cast<std::size_t>(k));
  int next = 0;
  for (int c = 0; c < k; ++c) {
    const auto& pts = members[static_cast<std::size_t>(c)];
    ClusterSummary& s = out.summaries[static_cast<std::size_t>(c)];
    s.cluster_id = c;
    s.size = pts.size();
    const SampleMoments m = sample_moments(pts);
    const EigenSym2 e = eig_sym2(m.covariance);
    s.centroid = m.mean;
    s.lambda1 = e.lambda1;
    s.lambda2 = std::max(0.0, e.lambda2);
    if (pts.size() >= 3 && s.lambda1 > 0.0) {
      s.spectral_ratio = std::clamp(s.lambda2 / s.lambda1, 0.0, 1.0);
    }
    if (s.lambda1 > s.lambda2) s.orientation_deg = fold_degrees(std::atan2(e.v1.y, e.v1.x));
    s.kept = s.spectral_ratio.has_value() && *s.spectral_ratio <= tau;
    if (s.kept) s.output_id = next++;
  }

  std::vector<int> labels(cloud.size(), Labeling::kNoise);
  for (PointId i = 0; i < cloud.size(); ++i) {
    if (!labeling.is_noise(i)) labels[i] = out.summaries[static_cast<std::size_t>(labeling[i])].output_id;
  }
  out.labels = Labeling(std::move(labels));
  return out;
}

FilterResult linscan_filtered(const PointCloud& cloud, const LinscanParams& params,
                              const LinscanOptions& options) {
  const LinscanResult raw = linscan(cloud, params, options);
  return spectral_filter(cloud, raw.labels, params.tau);
}

}  // namespace linscan
