#ifndef TEXWARP_WARP_HPP
#define TEXWARP_WARP_HPP

#include "texwarp/errors.hpp"
#include "texwarp/mat2.hpp"

namespace texwarp {

struct Tolerances {
  double eps_warp = 1e-9;  // absolute slack on the unit singular value
  double eps_cone = 1e-9;  // cone membership residual, relative to scale
  double eps_rank = 1e-8;  // relative singular-value cutoff for rank tests
};

/// A texture imaging transform: R(theta1) * diag(1, r) * R(theta2) with
/// r in (0, 1]. Largest singular value is 1 and the determinant positive.
class Warp {
 public:
  const Mat2& matrix() const { return m_; }

  static Warp unchecked(const Mat2& m) { return Warp(m); }

 private:
  explicit Warp(const Mat2& m) : m_(m) {}
  friend Warp validate(const Mat2& m, const Tolerances& tol);
  Mat2 m_;
};

/// Canonical factor triple of a warp. theta1 lives in [0, pi), theta2 in
/// [0, 2*pi); a frontal warp (r = 1) carries its full rotation in theta2.
struct WarpFactors {
  double theta1 = 0.0;
  double r = 1.0;
  double theta2 = 0.0;
};

struct ConeCheck {
  bool on_cone = false;
  bool on_negative_semicone = false;
  double residual = 0.0;
};

Mat2 compose(const WarpFactors& f);

WarpFactors decompose(const Warp& w);

/// Checks Definition-1 validity; throws NegativeDeterminant,
/// SingularValueMismatch (largest singular value off 1) or RankDeficient.
Warp validate(const Mat2& m, const Tolerances& tol);

bool is_valid_warp(const Mat2& m, const Tolerances& tol);

/// H = W^T W - I, a point on the cone y^2 = xz.
SymMat2 gram_deficit(const Warp& w);

ConeCheck cone_check(const SymMat2& h, const Tolerances& tol);

/// Unit surface normal implied by a warp; branch selects the sign of the
/// foreshortened image direction. Third component is always positive.
Vec3 warp_to_normal(const Warp& w, int branch);

}  // namespace texwarp

#endif
