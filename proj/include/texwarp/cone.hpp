#ifndef TEXWARP_CONE_HPP
#define TEXWARP_CONE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "texwarp/warp.hpp"

namespace texwarp {

/// Plane alpha*x + beta*y + gamma*z = delta with unit normal whose first
/// nonzero component is positive.
struct Plane {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  static Plane from_coefficients(double a, double b, double c, double d);
};

enum class ConicClass {
  Ellipse,
  Parabola,
  Hyperbola,
  SinglePoint,
  SingleLine,
  TwoLines,
};

const char* conic_name(ConicClass c);

/// Entries (a, b, c) of I - B^{-T} B^{-1}; translating the cone y^2 = xz by
/// them yields the cone (y+b)^2 = (x+a)(z+c) of a modified warp set.
struct ConeShift {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

enum class UniqueReason {
  GenericRank3,
  EllipseSlice,
  ParabolaSlice,
  TwoLinesSlice,
};

const char* unique_reason_name(UniqueReason r);

struct Verdict {
  bool ambiguous = false;
  std::optional<UniqueReason> reason;   // set when unique
  std::optional<ConicClass> conic;      // set when the deficits were sliced
  std::vector<Mat2> alternatives;       // verified non-rotational B matrices
  int affine_rank = 0;
  std::optional<Plane> plane;
  std::map<std::string, double> margins;
};

/// Rank of the centered point set in (x, y, z) coordinates; 3 means some
/// four points are affinely independent.
int affine_rank(const std::vector<SymMat2>& points, const Tolerances& tol);

/// Least-squares plane through a rank-2 point set (total least squares via
/// the smallest principal direction). Throws RankMismatch otherwise.
Plane fit_plane(const std::vector<SymMat2>& points, const Tolerances& tol);

/// Type of the intersection of the plane with the cone y^2 = xz.
ConicClass slice_conic_class(const Plane& p, const Tolerances& tol);

/// Inverts the plane-of-intersection relation: the returned shift's cone
/// contains the whole conic p intersected with y^2 = xz. None when no
/// nonzero shift produces this plane.
std::optional<ConeShift> shift_from_plane(const Plane& p,
                                          const Tolerances& tol);

/// B with I - B^{-T} B^{-1} equal to the shift; symmetric positive definite
/// representative. Throws NotPositiveDefinite when no real invertible B
/// exists.
Mat2 b_from_shift(const ConeShift& s, const Tolerances& tol);

/// True iff every T_i * B is a valid warp and B is not orthogonal.
bool verify_alternative(const std::vector<Warp>& warps, const Mat2& b,
                        const Tolerances& tol);

/// Non-rotational alternatives for degenerate (affine rank <= 1) deficit
/// sets, sampled deterministically from the given seed.
std::vector<Mat2> family_sample(const std::vector<Warp>& warps, int k,
                                std::uint64_t seed, const Tolerances& tol);

/// Full decision procedure: unique recovery vs. verified alternatives.
Verdict ambiguity_verdict(const std::vector<Warp>& warps,
                          const Tolerances& tol, std::uint64_t seed);

}  // namespace texwarp

#endif
