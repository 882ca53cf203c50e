// Shared test utilities: synthetic warp sets with prescribed deficit slices
// and a brute-force alternative-interpretation oracle.
#ifndef TEXWARP_TESTS_HELPERS_HPP
#define TEXWARP_TESTS_HELPERS_HPP

#include <cmath>
#include <vector>

#include "texwarp/mat2.hpp"
#include "texwarp/warp.hpp"

namespace texwarp::testutil {

// Point on the negative semicone y^2 = xz with x, z <= 0 and chosen y sign.
inline SymMat2 cone_point(double x, double z, int y_sign) {
  return SymMat2{x, y_sign * std::sqrt(x * z), z};
}

// Symmetric positive definite warp whose Gram deficit is exactly h.
// Requires 1 + x + z > 0 (the deficit's nonzero eigenvalue above -1).
inline Warp warp_from_deficit(const SymMat2& h) {
  return Warp::unchecked(spd_sqrt(SymMat2{1.0 + h.x, h.y, 1.0 + h.z}));
}

inline std::vector<Warp> warps_from_deficits(const std::vector<SymMat2>& hs) {
  std::vector<Warp> out;
  out.reserve(hs.size());
  for (const auto& h : hs) out.push_back(warp_from_deficit(h));
  return out;
}

// Deficits on the plane x - z = 0.5 (hyperbola slice; x in (-0.25, 0]).
inline std::vector<SymMat2> hyperbola_deficits() {
  std::vector<SymMat2> hs;
  int sign = 1;
  for (double x : {-0.02, -0.07, -0.12, -0.17, -0.22}) {
    hs.push_back(cone_point(x, x - 0.5, sign));
    sign = -sign;
  }
  return hs;
}

// Deficits on the plane z = -0.5 (parabola slice; x in (-0.5, 0]).
inline std::vector<SymMat2> parabola_deficits() {
  std::vector<SymMat2> hs;
  int sign = 1;
  for (double x : {0.0, -0.1, -0.2, -0.3, -0.4}) {
    hs.push_back(cone_point(x, -0.5, sign));
    sign = -sign;
  }
  return hs;
}

// Deficits on the plane x + z = -0.5 (ellipse slice).
inline std::vector<SymMat2> ellipse_deficits() {
  std::vector<SymMat2> hs;
  int sign = 1;
  for (double x : {0.0, -0.1, -0.25, -0.35, -0.5}) {
    hs.push_back(cone_point(x, -0.5 - x, sign));
    sign = -sign;
  }
  return hs;
}

// Deficits on the plane x - z = 0 (two lines through the apex).
inline std::vector<SymMat2> two_lines_deficits() {
  std::vector<SymMat2> hs;
  for (double t : {0.05, 0.1, 0.15, 0.2}) {
    hs.push_back(SymMat2{-t, t, -t});
    hs.push_back(SymMat2{-t, -t, -t});
  }
  return hs;
}

// Deficits on the generator x = y = 0 (a single line).
inline std::vector<SymMat2> generator_deficits() {
  std::vector<SymMat2> hs;
  for (double r : {0.3, 0.5, 0.7}) hs.push_back(SymMat2{0.0, 0.0, r * r - 1.0});
  return hs;
}

// Brute-force oracle for "does a substantially non-rotational alternative
// exist": scan cone shifts (a, b, c) on the grid [-0.9, 0.9]^3, step 0.05,
// and accept a B = (I - S)^{-1/2} whose products T_i B are warps up to a
// 5e-2 slack on the unit singular value. The margin on ||B^T B - I||_F
// discards candidates that merely reproduce the input: true ambiguity
// always admits strongly non-rotational exact alternatives, while mild
// shears can pass the coarse slack on any bounded deficit arc.
inline bool shift_grid_oracle(const std::vector<Warp>& warps) {
  const double slack = 5e-2;
  const double min_nonrotational = 0.6;
  for (int ia = -18; ia <= 18; ++ia) {
    for (int ib = -18; ib <= 18; ++ib) {
      for (int ic = -18; ic <= 18; ++ic) {
        const double a = 0.05 * ia;
        const double b = 0.05 * ib;
        const double c = 0.05 * ic;
        const SymMat2 m_prime{1.0 - a, -b, 1.0 - c};  // I - S
        if (!is_positive_definite(m_prime)) continue;
        if (sym_eigenvalues(m_prime)[1] < 1e-6) continue;
        const Mat2 bm = inverse(spd_sqrt(m_prime));
        const Mat2 btb = transpose(bm) * bm;
        if (frobenius_distance(btb, Mat2::identity()) <= min_nonrotational) {
          continue;
        }
        bool all_warps = true;
        for (const auto& w : warps) {
          const Mat2 p = w.matrix() * bm;
          if (det(p) <= 0.0) {
            all_warps = false;
            break;
          }
          const Svd2 s = svd2(p);
          if (std::abs(s.s1 - 1.0) > slack || s.s2 <= 0.0) {
            all_warps = false;
            break;
          }
        }
        if (all_warps) return true;
      }
    }
  }
  return false;
}

}  // namespace texwarp::testutil

#endif
