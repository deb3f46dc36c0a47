#include "linscan/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace linscan {
namespace {

// |X S X - I|_F for X = Sigma_q^{-1/2}, S = Sigma_p.
double whitened_deviation(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  return frobenius_norm(congruence(q.sigma_inv_sqrt(), p.sigma()).full() - Mat2::identity());
}

// dmu^T Sigma^{-1} dmu, clamped at zero against rounding.
double mahalanobis2(Vec2 delta, const SpdMatrix2& sigma_inv) {
  return std::max(0.0, dot(delta, sigma_inv * delta));
}

}  // namespace

double dist(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  const Vec2 delta = p.mu() - q.mu();
  const double shape = 0.5 * whitened_deviation(p, q) + 0.5 * whitened_deviation(q, p);
  const double location = std::sqrt(mahalanobis2(delta, q.sigma_inv())) +
                          std::sqrt(mahalanobis2(delta, p.sigma_inv()));
  return shape + (1.0 / std::numbers::sqrt2) * location;
}

double dist_lower_bound(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  return std::numbers::sqrt2 * norm(p.mu() - q.mu());
}

bool can_prune(const GaussianEmbedding& p, const GaussianEmbedding& q, double eps) {
  return dist_lower_bound(p, q) > eps;
}

double kl_gaussian(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  const Vec2 delta = p.mu() - q.mu();
  const double log_det_ratio = q.log_det() - p.log_det();
  const double tr = trace(q.sigma_inv().full() * p.sigma().full()) - 2.0;
  return std::max(0.0, 0.5 * log_det_ratio + 0.5 * tr + 0.5 * mahalanobis2(delta, q.sigma_inv()));
}

double kl_approx(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  const Vec2 delta = p.mu() - q.mu();
  const double dev = whitened_deviation(p, q);
  return 0.25 * dev * dev + 0.5 * mahalanobis2(delta, q.sigma_inv());
}

double triangle_slack_bound(double epsilon) {
  using std::numbers::sqrt2;
  return sqrt2 * epsilon + sqrt2 * epsilon * std::sqrt(1.0 + epsilon) + epsilon * epsilon;
}

double commutator_slack(const GaussianEmbedding& p, const GaussianEmbedding& q,
                        const GaussianEmbedding& k) {
  const Mat2 sp = p.sigma();
  const Mat2 sq = q.sigma();
  const Mat2 sk = k.sigma();
  const Mat2 sq_sqrt = q.sigma_sqrt();
  const Mat2 sq_isqrt = q.sigma_inv_sqrt();
  const Mat2 sk_isqrt = k.sigma_inv_sqrt();
  const Mat2 sp_isqrt = p.sigma_inv_sqrt();
  const Mat2 p_in_q = congruence(q.sigma_inv_sqrt(), p.sigma());
  const Mat2 k_in_q = congruence(q.sigma_inv_sqrt(), k.sigma());

  const double t1 = frobenius_norm(sk_isqrt * commutator(sp, sq_isqrt) * sq_sqrt * sk_isqrt);
  const double t2 = frobenius_norm(commutator(sk_isqrt, p_in_q) * sq * sk_isqrt);
  const double t3 = frobenius_norm(sp_isqrt * commutator(sk, sq_isqrt) * sq_sqrt * sp_isqrt);
  const double t4 = frobenius_norm(commutator(sp_isqrt, k_in_q) * sq * sp_isqrt);
  return 0.5 * (t1 + t2 + t3 + t4);
}

TriangleReport triangle_slack(const GaussianEmbedding& p, const GaussianEmbedding& q,
                              const GaussianEmbedding& k, double epsilon) {
  TriangleReport r;
  r.d_pq = dist(p, q);
  r.d_qk = dist(q, k);
  r.d_pk = dist(p, k);
  r.epsilon = epsilon;
  r.slack_bound = triangle_slack_bound(epsilon);
  r.e_term = commutator_slack(p, q, k);
  r.premise_holds = r.d_pq <= epsilon && r.d_qk <= epsilon;
  return r;
}

}  // namespace linscan
