#include "linscan/linalg.hpp"

#include <cmath>

namespace linscan {

EigenSym2 eig_sym2(const SpdMatrix2& m) {
  const double half_diff = 0.5 * (m.a() - m.c());
  const double mean = 0.5 * (m.a() + m.c());
  const double radius = std::hypot(half_diff, m.b());

  EigenSym2 e;
  e.lambda1 = mean + radius;
  e.lambda2 = mean - radius;
  if (radius > 0.0) {
    const double theta = 0.5 * std::atan2(m.b(), half_diff);
    e.v1 = {std::cos(theta), std::sin(theta)};
    e.v2 = {-e.v1.y, e.v1.x};
  }
  return e;
}

SpdMatrix2 compose_spectral(Vec2 v1, double lambda1, double lambda2) {
  // V diag(l1, l2) V^T = l2 I + (l1 - l2) v1 v1^T, exactly symmetric.
  const double diff = lambda1 - lambda2;
  return {lambda2 + diff * v1.x * v1.x, diff * v1.x * v1.y, lambda2 + diff * v1.y * v1.y};
}

SpdMatrix2 spd_power(const SpdMatrix2& m, double p) {
  const EigenSym2 e = eig_sym2(m);
  if (!(e.lambda2 >= kEigenFloor)) {
    throw DegenerateMatrixError("spd_power: smallest eigenvalue " + std::to_string(e.lambda2) +
                                " is below the positive-definiteness floor");
  }
  return compose_spectral(e.v1, std::pow(e.lambda1, p), std::pow(e.lambda2, p));
}

}  // namespace linscan
