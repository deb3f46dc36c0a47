#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "linscan/linalg.hpp"

namespace linscan {

using PointId = std::size_t;

/// Immutable ordered 2-D point set. Point i has id i.
class PointCloud {
 public:
  PointCloud() = default;
  // Throws std::invalid_argument on a non-finite coordinate.
  explicit PointCloud(std::vector<Vec2> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Vec2 operator[](PointId id) const { return points_[id]; }
  Vec2 at(PointId id) const { return points_.at(id); }
  std::span<const Vec2> points() const { return points_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  std::vector<Vec2> points_;
};

/// Per-point cluster ids aligned with point ids. Clusters are 0..K-1,
/// kNoise marks points in no cluster.
class Labeling {
 public:
  static constexpr int kNoise = -1;

  Labeling() = default;
  // Throws std::invalid_argument unless ids are contiguous 0..K-1 plus kNoise.
  explicit Labeling(std::vector<int> labels);

  // Maps arbitrary ids (negative = noise) to contiguous ids in order of
  // first appearance.
  static Labeling canonical(std::span<const int> raw);
  // Like canonical, but clusters keep their relative id order.
  static Labeling compact(std::span<const int> raw);
  static Labeling all_noise(std::size_t n) { return Labeling(std::vector<int>(n, kNoise)); }

  std::size_t size() const { return labels_.size(); }
  int operator[](PointId id) const { return labels_[id]; }
  std::span<const int> labels() const { return labels_; }
  int num_clusters() const { return num_clusters_; }
  std::size_t noise_count() const;
  bool is_noise(PointId id) const { return labels_[id] == kNoise; }

  friend bool operator==(const Labeling&, const Labeling&) = default;

 private:
  std::vector<int> labels_;
  int num_clusters_ = 0;
};

/// Normal distribution N(mu, sigma) with the square-root and inverse
/// factors of sigma precomputed. Embeddings produced by embed_point are
/// spectrally normalized (largest eigenvalue of sigma is exactly 1); the
/// type itself admits any SPD covariance.
class GaussianEmbedding {
 public:
  GaussianEmbedding() = default;

  // Throws DegenerateMatrixError if sigma is not positive definite.
  static GaussianEmbedding from_covariance(Vec2 mu, const SpdMatrix2& sigma);
  // Builds sigma = lambda1 v1 v1^T + lambda2 v2 v2^T directly from its
  // spectrum, so the caches are exact functions of the eigenvalues.
  static GaussianEmbedding from_spectrum(Vec2 mu, Vec2 v1, double lambda1, double lambda2);

  Vec2 mu() const { return mu_; }
  const SpdMatrix2& sigma() const { return sigma_; }
  const SpdMatrix2& sigma_inv() const { return sigma_inv_; }
  const SpdMatrix2& sigma_inv_sqrt() const { return sigma_inv_sqrt_; }
  const SpdMatrix2& sigma_sqrt() const { return sigma_sqrt_; }
  double lambda_max() const { return lambda1_; }
  double lambda_min() const { return lambda2_; }
  double log_det() const { return std::log(lambda1_) + std::log(lambda2_); }

 private:
  Vec2 mu_;
  SpdMatrix2 sigma_ = SpdMatrix2::identity();
  SpdMatrix2 sigma_inv_ = SpdMatrix2::identity();
  SpdMatrix2 sigma_inv_sqrt_ = SpdMatrix2::identity();
  SpdMatrix2 sigma_sqrt_ = SpdMatrix2::identity();
  double lambda1_ = 1.0;
  double lambda2_ = 1.0;
};

struct LinscanParams {
  int ecc_pts = 30;
  int min_pts = 10;
  double xi = 0.05;
  double eps = std::numeric_limits<double>::infinity();
  double tau = 0.5;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

}  // namespace linscan
