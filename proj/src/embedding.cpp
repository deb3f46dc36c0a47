#include "linscan/embedding.hpp"

#include <algorithm>
#include <limits>

#include "linscan/parallel.hpp"

namespace linscan {

double Regularization::ridge(double lambda_max_raw) const {
  if (mode == Mode::absolute) return value;
  return value * (lambda_max_raw + std::numeric_limits<double>::epsilon());
}

SampleMoments sample_moments(std::span<const Vec2> points) {
  const double m = static_cast<double>(points.size());
  Vec2 sum;
  for (Vec2 p : points) sum = sum + p;
  const Vec2 mean = (1.0 / m) * sum;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (Vec2 p : points) {
    const Vec2 d = p - mean;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  return {mean, SpdMatrix2(sxx / m, sxy / m, syy / m)};
}

SampleMoments sample_moments(const PointCloud& cloud, std::span<const PointId> ids) {
  std::vector<Vec2> pts;
  pts.reserve(ids.size());
  for (PointId id : ids) pts.push_back(cloud[id]);
  return sample_moments(pts);
}

GaussianEmbedding embed_point(const PointCloud& cloud, const NeighborIndex& index, PointId point_id,
                              std::size_t ecc_pts, const EmbeddingOptions& options) {
  if (ecc_pts < 3) throw std::invalid_argument("embed_point: eccPts must be at least 3");
  if (options.reg.value < 0.0) throw std::invalid_argument("embed_point: negative regularization");
  const std::size_t available = cloud.size() - (options.include_self ? 0 : 1);
  if (available < ecc_pts) {
    throw NeighborhoodTooSmallError("embed_point: cloud has " + std::to_string(cloud.size()) +
                                    " points, fewer than eccPts = " + std::to_string(ecc_pts));
  }

  const std::vector<PointId> nbrs = index.knn(point_id, ecc_pts, options.include_self);
  const SampleMoments moments = sample_moments(cloud, nbrs);
  const EigenSym2 raw = eig_sym2(moments.covariance);

  // Rounding can push the smaller eigenvalue of a rank-deficient
  // covariance slightly negative.
  const double l1 = std::max(raw.lambda1, 0.0);
  const double l2 = std::clamp(raw.lambda2, 0.0, l1);
  const double ridge = options.reg.ridge(l1);
  const double top = l1 + ridge;
  if (top <= 0.0) {
    return GaussianEmbedding::from_spectrum(moments.mean, {1.0, 0.0}, 1.0, 1.0);
  }
  return GaussianEmbedding::from_spectrum(moments.mean, raw.v1, 1.0, (l2 + ridge) / top);
}

std::vector<GaussianEmbedding> embed_all(const PointCloud& cloud, const NeighborIndex& index,
                                         std::size_t ecc_pts, const EmbeddingOptions& options) {
  std::vector<GaussianEmbedding> out(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    out[i] = embed_point(cloud, index, i, ecc_pts, options);
  });
  return out;
}

}  // namespace linscan
