#ifndef TEXWARP_MAT2_HPP
#define TEXWARP_MAT2_HPP

#include <array>
#include <cmath>

namespace texwarp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Row-major 2x2 matrix of reals.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static Mat2 identity() { return Mat2{}; }
  static Mat2 diagonal(double d1, double d2) { return Mat2{d1, 0.0, 0.0, d2}; }
};

/// Symmetric 2x2 matrix stored as the point (x, y, z) = (m11, m12, m22).
struct SymMat2 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Mat2 to_mat2() const { return Mat2{x, y, y, z}; }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2{a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
              a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

inline Vec2 operator*(const Mat2& a, const Vec2& v) {
  return Vec2{a.a11 * v.x + a.a12 * v.y, a.a21 * v.x + a.a22 * v.y};
}

inline Mat2 operator*(double s, const Mat2& a) {
  return Mat2{s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return Mat2{a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return Mat2{a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

inline Mat2 transpose(const Mat2& a) {
  return Mat2{a.a11, a.a21, a.a12, a.a22};
}

inline double det(const Mat2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }

inline double trace(const Mat2& a) { return a.a11 + a.a22; }

inline double frobenius_norm(const Mat2& a) {
  return std::sqrt(a.a11 * a.a11 + a.a12 * a.a12 + a.a21 * a.a21 +
                   a.a22 * a.a22);
}

inline double frobenius_distance(const Mat2& a, const Mat2& b) {
  return frobenius_norm(a - b);
}

/// Counterclockwise rotation: R(t) = [[cos t, -sin t], [sin t, cos t]].
inline Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Mat2{c, -s, s, c};
}

inline Mat2 inverse(const Mat2& a) {
  const double d = det(a);
  return Mat2{a.a22 / d, -a.a12 / d, -a.a21 / d, a.a11 / d};
}

/// Gram matrix A^T A, always symmetric.
inline SymMat2 gram(const Mat2& a) {
  return SymMat2{a.a11 * a.a11 + a.a21 * a.a21,
                 a.a11 * a.a12 + a.a21 * a.a22,
                 a.a12 * a.a12 + a.a22 * a.a22};
}

inline double det(const SymMat2& s) { return s.x * s.z - s.y * s.y; }

inline double frobenius_norm(const SymMat2& s) {
  return std::sqrt(s.x * s.x + 2.0 * s.y * s.y + s.z * s.z);
}

/// Eigenvalues of a symmetric 2x2, returned in descending order.
inline std::array<double, 2> sym_eigenvalues(const SymMat2& s) {
  const double mean = 0.5 * (s.x + s.z);
  const double diff = 0.5 * (s.x - s.z);
  const double rad = std::sqrt(diff * diff + s.y * s.y);
  return {mean + rad, mean - rad};
}

/// Closed-form SVD of a 2x2 matrix with positive determinant:
/// A = R(theta1) diag(s1, s2) R(theta2) with s1 >= s2 > 0.
struct Svd2 {
  double theta1 = 0.0;
  double s1 = 1.0;
  double s2 = 1.0;
  double theta2 = 0.0;
};

inline Svd2 svd2(const Mat2& a) {
  // Split into the rotation-like and reflection-like parts; the sum and
  // difference of the singular values and of the two angles fall out.
  const double e = 0.5 * (a.a11 + a.a22);
  const double h = 0.5 * (a.a21 - a.a12);
  const double f = 0.5 * (a.a11 - a.a22);
  const double g = 0.5 * (a.a21 + a.a12);
  const double q = std::sqrt(e * e + h * h);
  const double r = std::sqrt(f * f + g * g);
  const double sum_angle = std::atan2(h, e);
  const double diff_angle = (r > 0.0) ? std::atan2(g, f) : 0.0;
  Svd2 out;
  out.s1 = q + r;
  out.s2 = q - r;
  out.theta1 = 0.5 * (sum_angle + diff_angle);
  out.theta2 = 0.5 * (sum_angle - diff_angle);
  return out;
}

/// Principal square root of a symmetric positive definite 2x2 matrix.
/// Requires both eigenvalues strictly positive.
inline Mat2 spd_sqrt(const SymMat2& m) {
  // sqrt(M) = (M + sqrt(det) I) / sqrt(trace + 2 sqrt(det))
  const double d = det(m);
  const double sd = std::sqrt(d);
  const double t = m.x + m.z + 2.0 * sd;
  const double inv = 1.0 / std::sqrt(t);
  return Mat2{(m.x + sd) * inv, m.y * inv, m.y * inv, (m.z + sd) * inv};
}

inline bool is_positive_definite(const SymMat2& m) {
  return m.x > 0.0 && det(m) > 0.0;
}

}  // namespace texwarp

#endif
