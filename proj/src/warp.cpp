#include "texwarp/warp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace texwarp {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NegativeDeterminant: return "NegativeDeterminant";
    case Errc::SingularValueMismatch: return "SingularValueMismatch";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::DomainError: return "DomainError";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::RankMismatch: return "RankMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ConstructionFailed: return "ConstructionFailed";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::Singular: return "Singular";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::DegenerateInput: return "DegenerateInput";
  }
  return "Unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_two_pi(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod can land exactly on 2*pi after the correction
  if (t >= kTwoPi) t = 0.0;
  return t;
}

}  // namespace

Mat2 compose(const WarpFactors& f) {
  return rotation(f.theta1) * Mat2::diagonal(1.0, f.r) * rotation(f.theta2);
}

WarpFactors decompose(const Warp& w) {
  const Svd2 s = svd2(w.matrix());
  WarpFactors f;
  f.r = s.s2 / s.s1;
  if (1.0 - f.r <= 1e-9) {
    // Frontal warp: the factorization is a pure rotation, carried by theta2.
    f.r = 1.0;
    f.theta1 = 0.0;
    f.theta2 = wrap_two_pi(s.theta1 + s.theta2);
    return f;
  }
  // Canonicalize theta1 into [0, pi); shifting theta1 by pi is absorbed by
  // shifting theta2 by pi since diag(1, r) commutes with -I.
  double t1 = std::fmod(s.theta1, kPi);
  double shift = t1 - s.theta1;
  if (t1 < 0.0) {
    t1 += kPi;
    shift += kPi;
  }
  if (t1 >= kPi) {  // guard against fmod rounding
    t1 -= kPi;
    shift -= kPi;
  }
  f.theta1 = t1;
  f.theta2 = wrap_two_pi(s.theta2 + shift);
  return f;
}

Warp validate(const Mat2& m, const Tolerances& tol) {
  const double d = det(m);
  if (!(d > 0.0)) {
    throw Error(Errc::NegativeDeterminant,
                "warp must have positive determinant, got det = " +
                    std::to_string(d));
  }
  const Svd2 s = svd2(m);
  if (s.s2 <= tol.eps_warp) {
    throw Error(Errc::RankDeficient, "smallest singular value " +
                                         std::to_string(s.s2) +
                                         " is numerically zero");
  }
  if (std::abs(s.s1 - 1.0) > tol.eps_warp) {
    std::ostringstream os;
    os.precision(17);
    os << "largest singular value is " << s.s1 << ", expected 1";
    throw Error(Errc::SingularValueMismatch, os.str());
  }
  return Warp::unchecked(m);
}

bool is_valid_warp(const Mat2& m, const Tolerances& tol) {
  const double d = det(m);
  if (!(d > 0.0)) return false;
  const Svd2 s = svd2(m);
  return s.s2 > tol.eps_warp && std::abs(s.s1 - 1.0) <= tol.eps_warp;
}

SymMat2 gram_deficit(const Warp& w) {
  SymMat2 g = gram(w.matrix());
  g.x -= 1.0;
  g.z -= 1.0;
  return g;
}

ConeCheck cone_check(const SymMat2& h, const Tolerances& tol) {
  ConeCheck out;
  out.residual = h.y * h.y - h.x * h.z;
  const double n = frobenius_norm(h);
  const double slack = tol.eps_cone * std::max(1.0, n * n);
  out.on_cone = std::abs(out.residual) <= slack;
  out.on_negative_semicone =
      out.on_cone && h.x <= tol.eps_cone && h.z <= tol.eps_cone;
  return out;
}

Vec3 warp_to_normal(const Warp& w, int branch) {
  const WarpFactors f = decompose(w);
  if (f.r >= 1.0) return Vec3{0.0, 0.0, 1.0};
  const double slant = std::acos(f.r);
  const double sign = (branch >= 0) ? 1.0 : -1.0;
  // Foreshortened image direction: R(theta1) applied to e2.
  const Vec2 d{sign * -std::sin(f.theta1), sign * std::cos(f.theta1)};
  const double ss = std::sin(slant);
  return Vec3{ss * d.x, ss * d.y, f.r};
}

}  // namespace texwarp
