#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "linscan/neighbors.hpp"
#include "linscan/types.hpp"

namespace linscan {

/// Ridge added to a neighborhood covariance before spectral normalization.
/// `absolute` adds value * I; `relative` adds value * (lambda_max + eps_mach) * I.
struct Regularization {
  enum class Mode { absolute, relative };
  Mode mode = Mode::relative;
  double value = 1e-6;

  static constexpr Regularization absolute(double v) { return {Mode::absolute, v}; }
  static constexpr Regularization relative(double v) { return {Mode::relative, v}; }
  static constexpr Regularization none() { return {Mode::absolute, 0.0}; }

  double ridge(double lambda_max_raw) const;
};

struct EmbeddingOptions {
  Regularization reg = Regularization::relative(1e-6);
  // Whether a point belongs to its own eccPts-neighborhood.
  bool include_self = true;
};

class NeighborhoodTooSmallError : public std::invalid_argument {
 public:
  explicit NeighborhoodTooSmallError(const std::string& what) : std::invalid_argument(what) {}
};

// Population mean and covariance (1/m) of a point set.
struct SampleMoments {
  Vec2 mean;
  SpdMatrix2 covariance;
};
SampleMoments sample_moments(std::span<const Vec2> points);
SampleMoments sample_moments(const PointCloud& cloud, std::span<const PointId> ids);

/// Gaussian fitted to the ecc_pts nearest neighbors of `point_id`,
/// regularized and rescaled so the largest covariance eigenvalue is 1.
/// An all-identical neighborhood yields sigma = I.
GaussianEmbedding embed_point(const PointCloud& cloud, const NeighborIndex& index, PointId point_id,
                              std::size_t ecc_pts, const EmbeddingOptions& options = {});

/// embed_point for every id, aligned with ids.
std::vector<GaussianEmbedding> embed_all(const PointCloud& cloud, const NeighborIndex& index,
                                         std::size_t ecc_pts, const EmbeddingOptions& options = {});

}  // namespace linscan
