#include "linscan/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace linscan {

PointCloud::PointCloud(std::vector<Vec2> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw std::invalid_argument("PointCloud: point " + std::to_string(i) +
                                  " has a non-finite coordinate");
    }
  }
}

Labeling::Labeling(std::vector<int> labels) : labels_(std::move(labels)) {
  int max_id = kNoise;
  for (int l : labels_) {
    if (l < kNoise) throw std::invalid_argument("Labeling: label below noise id");
    max_id = std::max(max_id, l);
  }
  std::vector<bool> seen(static_cast<std::size_t>(max_id + 1), false);
  for (int l : labels_) {
    if (l >= 0) seen[static_cast<std::size_t>(l)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::invalid_argument("Labeling: cluster ids are not contiguous");
  }
  num_clusters_ = max_id + 1;
}

Labeling Labeling::canonical(std::span<const int> raw) {
  std::unordered_map<int, int> remap;
  std::vector<int> out(raw.size(), kNoise);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) continue;
    auto [it, inserted] = remap.try_emplace(raw[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return Labeling(std::move(out));
}

Labeling Labeling::compact(std::span<const int> raw) {
  std::map<int, int> remap;
  for (int l : raw) {
    if (l >= 0) remap.emplace(l, 0);
  }
  int next = 0;
  for (auto& [from, to] : remap) to = next++;
  std::vector<int> out(raw.size(), kNoise);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] >= 0) out[i] = remap[raw[i]];
  }
  return Labeling(std::move(out));
}

std::size_t Labeling::noise_count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), kNoise));
}

GaussianEmbedding GaussianEmbedding::from_covariance(Vec2 mu, const SpdMatrix2& sigma) {
  const EigenSym2 e = eig_sym2(sigma);
  GaussianEmbedding g = from_spectrum(mu, e.v1, e.lambda1, e.lambda2);
  g.sigma_ = sigma;
  return g;
}

GaussianEmbedding GaussianEmbedding::from_spectrum(Vec2 mu, Vec2 v1, double lambda1,
                                                   double lambda2) {
  if (!(lambda2 >= kEigenFloor) || !(lambda1 >= lambda2) || !std::isfinite(lambda1)) {
    throw DegenerateMatrixError("GaussianEmbedding: covariance is not positive definite (lambda_min = " +
                                std::to_string(lambda2) + ")");
  }
  GaussianEmbedding g;
  g.mu_ = mu;
  g.lambda1_ = lambda1;
  g.lambda2_ = lambda2;
  g.sigma_ = compose_spectral(v1, lambda1, lambda2);
  g.sigma_inv_ = compose_spectral(v1, 1.0 / lambda1, 1.0 / lambda2);
  g.sigma_sqrt_ = compose_spectral(v1, std::sqrt(lambda1), std::sqrt(lambda2));
  g.sigma_inv_sqrt_ = compose_spectral(v1, 1.0 / std::sqrt(lambda1), 1.0 / std::sqrt(lambda2));
  return g;
}

void LinscanParams::validate() const {
  if (ecc_pts < 3) throw std::invalid_argument("eccPts must be at least 3");
  if (min_pts < 2) throw std::invalid_argument("minPts must be at least 2");
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive (or inf)");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in (0, 1]");
}

}  // namespace linscan
