#pragma once

#include "linscan/types.hpp"

namespace linscan {

/// Symmetric KL-derived distance between two Gaussians:
///
///   D(P,Q) = 1/2 |Sq^-1/2 Sp Sq^-1/2 - I|_F + 1/2 |Sp^-1/2 Sq Sp^-1/2 - I|_F
///          + 1/sqrt2 |dmu|_{Sq^-1} + 1/sqrt2 |dmu|_{Sp^-1}
///
/// Not a metric (no triangle inequality), but symmetric, nonnegative and
/// zero only for P = Q.
double dist(const GaussianEmbedding& p, const GaussianEmbedding& q);

// sqrt(2) * |mu_p - mu_q|, a lower bound on dist for spectrally
// normalized embeddings (Sigma^-1 >= I).
double dist_lower_bound(const GaussianEmbedding& p, const GaussianEmbedding& q);

// True only when dist(p, q) > eps is guaranteed by the mean-separation bound.
bool can_prune(const GaussianEmbedding& p, const GaussianEmbedding& q, double eps);

// Exact KL(P|Q) for Gaussians; log-determinants from eigenvalues.
double kl_gaussian(const GaussianEmbedding& p, const GaussianEmbedding& q);

// Second-order approximation M(P|Q) = 1/4 |Sq^-1/2 Sp Sq^-1/2 - I|_F^2 + 1/2 dmu^T Sq^-1 dmu.
double kl_approx(const GaussianEmbedding& p, const GaussianEmbedding& q);

/// Terms of the relaxed triangle inequality for D on a triple (P, Q, K):
///   D(P,K) <= D(P,Q) + D(Q,K) + slack_bound(eps) + E(P,Q,K)
/// where E is the exact commutator slack, zero when the three covariances
/// commute.
struct TriangleReport {
  double d_pq = 0.0;
  double d_qk = 0.0;
  double d_pk = 0.0;
  double epsilon = 0.0;
  double slack_bound = 0.0;  // sqrt2 eps + sqrt2 eps sqrt(1 + eps) + eps^2
  double e_term = 0.0;
  // D(P,Q) <= eps and D(Q,K) <= eps; the bound is only claimed then.
  bool premise_holds = false;

  double rhs() const { return d_pq + d_qk + slack_bound + e_term; }
  bool satisfied() const { return d_pk <= rhs(); }
};

double triangle_slack_bound(double epsilon);
double commutator_slack(const GaussianEmbedding& p, const GaussianEmbedding& q,
                        const GaussianEmbedding& k);
TriangleReport triangle_slack(const GaussianEmbedding& p, const GaussianEmbedding& q,
                              const GaussianEmbedding& k, double epsilon);

}  // namespace linscan
