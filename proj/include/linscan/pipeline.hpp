#pragma once

#include <optional>
#include <span>
#include <vector>

#include "linscan/density.hpp"
#include "linscan/embedding.hpp"
#include "linscan/neighbors.hpp"
#include "linscan/types.hpp"

namespace linscan {

/// DistanceOracle over Gaussian embeddings using the KL-derived distance.
/// With pruning on, radius queries first collect candidates whose means lie
/// within eps/sqrt2 (the mean-separation bound) and evaluate the exact
/// distance only for those.
class GaussianOracle final : public DistanceOracle {
 public:
  GaussianOracle(std::span<const GaussianEmbedding> embeddings, bool prune = true);

  std::size_t size() const override { return embeddings_.size(); }
  double distance(PointId i, PointId j) const override;
  std::vector<Neighbor> neighbors(PointId i, double eps) const override;

 private:
  std::span<const GaussianEmbedding> embeddings_;
  std::vector<Vec2> means_;
  std::optional<NeighborIndex> mean_index_;
};

struct LinscanOptions {
  bool prune = true;
  EmbeddingOptions embedding;
};

struct LinscanResult {
  Labeling labels;  // xi extraction over the embeddings, before the spectral filter
  OpticsResult optics;
  std::vector<GaussianEmbedding> embeddings;
};

/// Embeds every point, runs OPTICS on the embeddings under dist() and
/// pulls the xi-extracted labels back to the points.
/// Throws std::invalid_argument if the cloud has fewer than
/// max(eccPts, minPts) points.
LinscanResult linscan(const PointCloud& cloud, const LinscanParams& params,
                      const LinscanOptions& options = {});

struct ClusterSummary {
  int cluster_id = 0;  // id in the labeling given to spectral_filter
  std::size_t size = 0;
  Vec2 centroid;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::optional<double> spectral_ratio;   // empty when undefined (size < 3 or zero spread)
  std::optional<double> orientation_deg;  // empty when isotropic
  bool kept = false;
  int output_id = Labeling::kNoise;       // id in the filtered labeling, if kept
};

struct FilterResult {
  Labeling labels;
  std::vector<ClusterSummary> summaries;  // one per input cluster, by cluster id
};

/// Demotes to noise every cluster whose covariance eigenvalue ratio
/// lambda_min/lambda_max exceeds tau, or is undefined. Kept clusters are
/// renumbered in their original order.
FilterResult spectral_filter(const PointCloud& cloud, const Labeling& labeling, double tau);

/// Principal-axis angle in degrees, folded to [0, 180). Throws
/// std::domain_error if there are fewer than two distinct points.
double cluster_orientation(std::span<const Vec2> points);

/// linscan followed by spectral_filter with params.tau.
FilterResult linscan_filtered(const PointCloud& cloud, const LinscanParams& params,
                              const LinscanOptions& options = {});

}  // namespace linscan
