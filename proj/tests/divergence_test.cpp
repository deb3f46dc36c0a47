#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "linscan/divergence.hpp"
#include "test_util.hpp"

namespace linscan {
namespace {

using testing::random_embedding;

GaussianEmbedding gaussian(Vec2 mu, SpdMatrix2 sigma) { return GaussianEmbedding::from_covariance(mu, sigma); }

// Independent oracle for D. The whitened deviation |Sq^-1/2 Sp Sq^-1/2 - I|_F
// depends only on the eigenvalues of Sq^-1 Sp (a similar matrix), which
// follow from its trace and determinant; Mahalanobis terms use the explicit
// 2x2 inverse.
double whitened_oracle(const SpdMatrix2& sp, const SpdMatrix2& sq) {
  const Mat2 q = sq.full();
  const double det_q = determinant(q);
  const Mat2 q_inv = (1.0 / det_q) * Mat2{q.d, -q.b, -q.c, q.a};
  const Mat2 m = q_inv * sp.full();
  const double tr = trace(m);
  const double det = determinant(m);
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double mu1 = 0.5 * tr + disc;
  const double mu2 = 0.5 * tr - disc;
  return std::sqrt((mu1 - 1) * (mu1 - 1) + (mu2 - 1) * (mu2 - 1));
}

double mahalanobis_oracle(Vec2 d, const SpdMatrix2& s) {
  const double det = s.determinant();
  return std::sqrt((s.c() * d.x * d.x - 2 * s.b() * d.x * d.y + s.a() * d.y * d.y) / det);
}

double dist_oracle(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  const Vec2 d = p.mu() - q.mu();
  return 0.5 * whitened_oracle(p.sigma(), q.sigma()) + 0.5 * whitened_oracle(q.sigma(), p.sigma()) +
         (mahalanobis_oracle(d, q.sigma()) + mahalanobis_oracle(d, p.sigma())) / std::sqrt(2.0);
}

double kl_oracle(const GaussianEmbedding& p, const GaussianEmbedding& q) {
  const SpdMatrix2& sp = p.sigma();
  const SpdMatrix2& sq = q.sigma();
  const double det_q = sq.determinant();
  const double tr = (sq.c() * sp.a() - 2 * sq.b() * sp.b() + sq.a() * sp.c()) / det_q;  // tr(Sq^-1 Sp)
  const double m = mahalanobis_oracle(p.mu() - q.mu(), sq);
  return 0.5 * (std::log(det_q / sp.determinant()) + tr - 2.0 + m * m);
}

TEST(Dist, IdenticalIsZero) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    const GaussianEmbedding p = random_embedding(rng);
    ASSERT_NEAR(dist(p, p), 0.0, 1e-12);
  }
}

TEST(Dist, UnitMeanShiftWithIdentityCovariance) {
  const auto p = gaussian({0, 0}, SpdMatrix2::identity());
  const auto q = gaussian({1, 0}, SpdMatrix2::identity());
  EXPECT_NEAR(dist(p, q), std::sqrt(2.0), 1e-15);
}

TEST(Dist, DiagonalShapeOnly) {
  const auto p = gaussian({0, 0}, SpdMatrix2::diagonal(1.0, 0.25));
  const auto q = gaussian({0, 0}, SpdMatrix2::identity());
  EXPECT_NEAR(dist(p, q), 1.875, 1e-15);
}

TEST(Dist, MatchesOracleAndIsSymmetric) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10000; ++t) {
    const GaussianEmbedding p = random_embedding(rng);
    const GaussianEmbedding q = random_embedding(rng);
    const double d = dist(p, q);
    ASSERT_EQ(d, dist(q, p));
    ASSERT_GE(d, 0.0);
    ASSERT_NEAR(d, dist_oracle(p, q), 1e-8 * std::max(1.0, d));
  }
}

TEST(Dist, LowerBoundHoldsForNormalizedPairs) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10000; ++t) {
    const GaussianEmbedding p = random_embedding(rng);
    const GaussianEmbedding q = random_embedding(rng);
    ASSERT_GE(dist(p, q), std::sqrt(2.0) * norm(p.mu() - q.mu()) - 1e-9);
    ASSERT_DOUBLE_EQ(dist_lower_bound(p, q), std::sqrt(2.0) * norm(p.mu() - q.mu()));
  }
}

TEST(Dist, SmallDistanceImpliesNearlyEqual) {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const GaussianEmbedding p = random_embedding(rng);
    const double scale = std::pow(10.0, -4.0 - 6.0 * (t % 10) / 10.0);
    const EigenSym2 e = eig_sym2(p.sigma());
    const double ang = std::atan2(e.v1.y, e.v1.x) + scale * g(rng);
    const auto q = GaussianEmbedding::from_spectrum(p.mu() + Vec2{scale * g(rng), scale * g(rng)},
                                                    {std::cos(ang), std::sin(ang)}, 1.0,
                                                    e.lambda2 * (1.0 + scale * g(rng)));
    if (dist(p, q) < 1e-7) {
      ASSERT_LT(norm(p.mu() - q.mu()), 1e-6);
      ASSERT_LT(frobenius_norm(p.sigma().full() - q.sigma().full()), 1e-6);
    }
  }
}

TEST(Dist, OrthogonalLineationGrowsAsFloorShrinks) {
  double previous = 0.0;
  for (double r : {1e-2, 1e-3, 1e-4}) {
    const auto p = GaussianEmbedding::from_spectrum({0, 0}, {1, 0}, 1.0, r);
    const auto q = GaussianEmbedding::from_spectrum({0, 0}, {0, 1}, 1.0, r);
    const double d = dist(p, q);
    EXPECT_GT(d, previous);
    previous = d;
  }
}

TEST(CanPrune, Examples) {
  const auto p = gaussian({0, 0}, SpdMatrix2::identity());
  const auto q = gaussian({0.8, 0}, SpdMatrix2::identity());
  EXPECT_TRUE(can_prune(p, q, 1.0));
  EXPECT_FALSE(can_prune(p, q, 1.2));
  for (double eps : {1e-9, 0.1, 10.0}) EXPECT_FALSE(can_prune(p, p, eps));
}

TEST(CanPrune, NeverPrunesAPairWithinEps) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> eps_dist(0.01, 5.0);
  int pruned = 0;
  for (int t = 0; t < 10000; ++t) {
    const GaussianEmbedding p = random_embedding(rng, 0.5);
    const GaussianEmbedding q = random_embedding(rng, 0.5);
    const double eps = eps_dist(rng);
    if (can_prune(p, q, eps)) {
      ++pruned;
      ASSERT_GT(dist(p, q), eps);
    }
  }
  EXPECT_GT(pruned, 100);
}

TEST(KlGaussian, Examples) {
  const auto i0 = gaussian({0, 0}, SpdMatrix2::identity());
  EXPECT_EQ(kl_gaussian(i0, i0), 0.0);
  EXPECT_NEAR(kl_gaussian(gaussian({1, 0}, SpdMatrix2::identity()), i0), 0.5, 1e-15);
  const auto p = gaussian({0, 0}, SpdMatrix2::diagonal(2.0, 1.0));
  EXPECT_NEAR(kl_gaussian(p, i0), 0.5 - 0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(kl_gaussian(p, i0), 0.153426, 1e-6);
}

TEST(KlGaussian, MatchesOracleNonnegativeAndAsymmetric) {
  std::mt19937_64 rng(46);
  int asymmetric = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto p = gaussian({0.1 * (t % 7), 0.0}, testing::random_spd(rng, 0.05, 5.0));
    const auto q = gaussian({0.0, 0.05 * (t % 5)}, testing::random_spd(rng, 0.05, 5.0));
    const double kl = kl_gaussian(p, q);
    ASSERT_GE(kl, 0.0);
    ASSERT_NEAR(kl, kl_oracle(p, q), 1e-9 * std::max(1.0, kl));
    if (std::abs(kl - kl_gaussian(q, p)) > 1e-6) ++asymmetric;
  }
  EXPECT_GT(asymmetric, 9000);
}

TEST(KlApprox, WorkedScalarCase) {
  const auto p = gaussian({0, 0}, SpdMatrix2::diagonal(1.1, 1.1));
  const auto q = gaussian({0, 0}, SpdMatrix2::identity());
  EXPECT_NEAR(kl_approx(p, q), 0.005, 1e-15);
  const double exact = 0.1 - std::log(1.1);
  EXPECT_NEAR(kl_gaussian(p, q), exact, 1e-15);
  EXPECT_NEAR(kl_gaussian(p, q), 0.0046898, 1e-6);
  EXPECT_NEAR(kl_approx(p, q) - kl_gaussian(p, q), 3.1e-4, 0.05e-4);
  EXPECT_EQ(kl_approx(q, q), 0.0);
}

TEST(KlApprox, ExactForMeanShiftOnly) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 100; ++t) {
    const SpdMatrix2 s = testing::random_spd(rng, 0.1, 3.0);
    const auto p = gaussian({0.3, -0.2}, s);
    const auto q = gaussian({-0.1, 0.4}, s);
    ASSERT_NEAR(kl_approx(p, q), kl_gaussian(p, q), 1e-12);
  }
}

TEST(KlApprox, ErrorIsThirdOrder) {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 50; ++trial) {
    const SpdMatrix2 sq = testing::random_spd(rng, 0.1, 3.0);
    // Positive-definite direction H with unit spectral norm.
    std::uniform_real_distribution<double> h_eig(0.2, 1.0);
    std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
    const double t = ang(rng);
    const Mat2 h = compose_spectral({std::cos(t), std::sin(t)}, 1.0, h_eig(rng)).full();
    const Mat2 root = spd_power(sq, 0.5).full();
    const auto q = gaussian({0, 0}, sq);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double deltas[] = {0.2, 0.1, 0.05, 0.025};
    for (double delta : deltas) {
      const SpdMatrix2 sp = SpdMatrix2::symmetrize(root * (Mat2::identity() + delta * h) * root);
      const auto p = gaussian({0, 0}, sp);
      const double x = std::log(delta);
      const double y = std::log(std::abs(kl_approx(p, q) - kl_gaussian(p, q)));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    ASSERT_GE(slope, 2.7) << "trial " << trial;
  }
}

TEST(TriangleSlack, BoundFormula) {
  const double eps = 0.5;
  EXPECT_NEAR(triangle_slack_bound(eps),
              std::sqrt(2.0) * eps + std::sqrt(2.0) * eps * std::sqrt(1 + eps) + eps * eps, 1e-15);
}

TEST(TriangleSlack, DiagonalTripleHasZeroCommutatorTerm) {
  const auto p = gaussian({0, 0}, SpdMatrix2::diagonal(1.0, 0.1));
  const auto q = gaussian({0.1, 0}, SpdMatrix2::diagonal(0.5, 1.0));
  const auto k = gaussian({0, 0.2}, SpdMatrix2::diagonal(1.0, 0.01));
  EXPECT_NEAR(commutator_slack(p, q, k), 0.0, 1e-12);
}

TEST(TriangleSlack, CoincidentTriple) {
  const auto p = GaussianEmbedding::from_spectrum({1, 2}, {0.6, 0.8}, 1.0, 0.01);
  const TriangleReport r = triangle_slack(p, p, p, 0.1);
  EXPECT_NEAR(r.d_pk, 0.0, 1e-12);
  EXPECT_TRUE(r.premise_holds);
  EXPECT_TRUE(r.satisfied());
  EXPECT_NEAR(r.e_term, 0.0, 1e-12);
}

TEST(TriangleSlack, NonCommutingTripleHasPositiveTerm) {
  const auto p = GaussianEmbedding::from_spectrum({0, 0}, {1, 0}, 1.0, 0.2);
  const auto q = GaussianEmbedding::from_spectrum({0, 0}, {std::cos(0.3), std::sin(0.3)}, 1.0, 0.5);
  const auto k = GaussianEmbedding::from_spectrum({0, 0}, {std::cos(1.0), std::sin(1.0)}, 1.0, 0.1);
  EXPECT_GT(commutator_slack(p, q, k), 0.0);
}

TEST(TriangleSlack, RandomNearbyTriplesSatisfyRelaxedInequality) {
  std::mt19937_64 rng(49);
  for (double eps : {0.1, 0.5}) {
    int checked = 0;
    for (int t = 0; t < 20000 && checked < 2000; ++t) {
      const GaussianEmbedding p = random_embedding(rng, 1.0, 0.05);
      const GaussianEmbedding q = testing::perturbed_embedding(rng, p, 0.1 * eps);
      const GaussianEmbedding k = testing::perturbed_embedding(rng, q, 0.1 * eps);
      const TriangleReport r = triangle_slack(p, q, k, eps);
      if (!r.premise_holds) continue;
      ++checked;
      ASSERT_TRUE(r.satisfied()) << "d_pk=" << r.d_pk << " rhs=" << r.rhs();
    }
    EXPECT_GE(checked, 2000);
  }
}

TEST(TriangleSlack, ReportFlagsPremise) {
  const auto p = gaussian({0, 0}, SpdMatrix2::identity());
  const auto q = gaussian({5, 0}, SpdMatrix2::identity());
  const TriangleReport r = triangle_slack(p, q, p, 0.1);
  EXPECT_FALSE(r.premise_holds);
  EXPECT_NEAR(r.d_pq, 5 * std::sqrt(2.0), 1e-12);
}

}  // namespace
}  // namespace linscan
