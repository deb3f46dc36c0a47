#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace linscan {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr Vec2 operator+(Vec2 u, Vec2 v) { return {u.x + v.x, u.y + v.y}; }
inline constexpr Vec2 operator-(Vec2 u, Vec2 v) { return {u.x - v.x, u.y - v.y}; }
inline constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline constexpr bool operator==(Vec2 u, Vec2 v) { return u.x == v.x && u.y == v.y; }
inline constexpr double dot(Vec2 u, Vec2 v) { return u.x * v.x + u.y * v.y; }
inline constexpr double squared_norm(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(squared_norm(v)); }

// General 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
};

inline constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline constexpr Mat2 operator+(const Mat2& m, const Mat2& n) {
  return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
}
inline constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
  return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
}
inline constexpr Mat2 operator*(double s, const Mat2& m) {
  return {s * m.a, s * m.b, s * m.c, s * m.d};
}
inline constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}
inline constexpr Mat2 transpose(const Mat2& m) { return {m.a, m.c, m.b, m.d}; }
inline constexpr double trace(const Mat2& m) { return m.a + m.d; }
inline constexpr double determinant(const Mat2& m) { return m.a * m.d - m.b * m.c; }

// Standard Frobenius norm sqrt(tr(A^T A)).
inline double frobenius_norm(const Mat2& m) {
  return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
}

/// Symmetric 2x2 matrix [[a, b], [b, c]] stored as three scalars.
///
/// Symmetry holds by construction. Positive definiteness is not enforced
/// here; operations that need it (spd_power, Gaussian construction) check
/// the smallest eigenvalue against kEigenFloor.
class SpdMatrix2 {
 public:
  constexpr SpdMatrix2() = default;
  constexpr SpdMatrix2(double a, double b, double c) : a_(a), b_(b), c_(c) {}

  static constexpr SpdMatrix2 identity() { return {1.0, 0.0, 1.0}; }
  static constexpr SpdMatrix2 diagonal(double d1, double d2) { return {d1, 0.0, d2}; }

  // Symmetric part of a general matrix.
  static constexpr SpdMatrix2 symmetrize(const Mat2& m) {
    return {m.a, 0.5 * (m.b + m.c), m.d};
  }

  constexpr double a() const { return a_; }
  constexpr double b() const { return b_; }
  constexpr double c() const { return c_; }

  constexpr Mat2 full() const { return {a_, b_, b_, c_}; }
  constexpr operator Mat2() const { return full(); }

  constexpr double trace() const { return a_ + c_; }
  constexpr double determinant() const { return a_ * c_ - b_ * b_; }

  friend constexpr bool operator==(const SpdMatrix2&, const SpdMatrix2&) = default;

 private:
  double a_ = 0.0;
  double b_ = 0.0;
  double c_ = 0.0;
};

inline constexpr SpdMatrix2 operator+(const SpdMatrix2& m, const SpdMatrix2& n) {
  return {m.a() + n.a(), m.b() + n.b(), m.c() + n.c()};
}
inline constexpr SpdMatrix2 operator*(double s, const SpdMatrix2& m) {
  return {s * m.a(), s * m.b(), s * m.c()};
}
inline constexpr Vec2 operator*(const SpdMatrix2& m, Vec2 v) {
  return {m.a() * v.x + m.b() * v.y, m.b() * v.x + m.c() * v.y};
}

// Positive-definiteness floor. Well below the embedding regularization, so
// it only trips on contract violations.
inline constexpr double kEigenFloor = 1e-9;

class DegenerateMatrixError : public std::domain_error {
 public:
  explicit DegenerateMatrixError(const std::string& what) : std::domain_error(what) {}
};

struct EigenSym2 {
  double lambda1 = 0.0;  // largest
  double lambda2 = 0.0;
  Vec2 v1{1.0, 0.0};
  Vec2 v2{0.0, 1.0};
};

/// Closed-form eigendecomposition of a symmetric 2x2 matrix.
/// Eigenvectors form a right-handed orthonormal basis with v1 at angle
/// 0.5*atan2(2b, a - c), i.e. in (-90, 90] degrees.
EigenSym2 eig_sym2(const SpdMatrix2& m);

// V diag(l1, l2) V^T.
SpdMatrix2 compose_spectral(Vec2 v1, double lambda1, double lambda2);

/// V diag(l1^p, l2^p) V^T. Throws DegenerateMatrixError if the smallest
/// eigenvalue is below kEigenFloor.
SpdMatrix2 spd_power(const SpdMatrix2& m, double p);

// AB - BA.
inline constexpr Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

// X S X for symmetric X and S; the result is symmetric and stored as such.
inline constexpr SpdMatrix2 congruence(const SpdMatrix2& x, const SpdMatrix2& s) {
  return SpdMatrix2::symmetrize(x.full() * s.full() * x.full());
}

inline double frobenius_norm(const SpdMatrix2& m) { return frobenius_norm(m.full()); }

}  // namespace linscan
