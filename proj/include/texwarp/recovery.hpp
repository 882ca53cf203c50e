#ifndef TEXWARP_RECOVERY_HPP
#define TEXWARP_RECOVERY_HPP

#include <utility>
#include <vector>

#include "texwarp/warp.hpp"

namespace texwarp {

/// Registration output: invertible positive-determinant matrices that
/// jointly re-explain all patches by one texture (W_i = T_i B).
struct GoodWarpSet {
  std::vector<Mat2> matrices;
};

/// Outcome of the metric-upgrade linear solve for M = B^T B. The auxiliary
/// unknown d tracks det(M).
struct MetricSolution {
  enum class Kind { Unique, Family, Underdetermined };
  Kind kind = Kind::Underdetermined;
  std::vector<std::pair<SymMat2, double>> solutions;  // (M, d), d ascending
  int rank = 0;
  int nullspace_dim = 0;
  double residual = 0.0;  // max row residual of the stacked system
};

/// One metric solution carried through the upgrade: canonical B and the
/// recovered warps W_i * B^{-1}. warps is empty when validation failed.
struct Interpretation {
  SymMat2 metric;
  double d = 0.0;
  Mat2 b_hat;
  std::vector<Warp> warps;
  bool warps_valid = false;
};

struct UpgradeResult {
  MetricSolution metric;
  std::vector<Interpretation> interpretations;
};

struct TextureSpec {
  Vec2 tau{1.0, 0.0};
  Vec2 sigma{0.0, 1.0};
};

/// Each observation contributes the linear row
/// [g22, -2 g12, g11, -1] . (m11, m12, m22, d) = det(G), G = W^T W.
MetricSolution recover_metric(const GoodWarpSet& ws, const Tolerances& tol);

/// Principal symmetric positive definite square root of M.
Mat2 metric_to_b(const SymMat2& m);

/// Metric upgrade: recovers the true warps up to a common rotation.
UpgradeResult upgrade(const GoodWarpSet& ws, const Tolerances& tol);

/// Planar Procrustes: rotation O minimizing sum ||A_i O - C_i||_F^2.
Mat2 align_rotation(const std::vector<Mat2>& a, const std::vector<Mat2>& c);

/// (B^{-1} tau, B^{-1} sigma): the texture periods seen by the alternative.
std::pair<Vec2, Vec2> transported_periods(const Mat2& b,
                                          const TextureSpec& t);

}  // namespace texwarp

#endif
