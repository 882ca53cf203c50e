#include "texwarp/cone.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "texwarp/rng.hpp"

namespace texwarp {

const char* conic_name(ConicClass c) {
  switch (c) {
    case ConicClass::Ellipse: return "ellipse";
    case ConicClass::Parabola: return "parabola";
    case ConicClass::Hyperbola: return "hyperbola";
    case ConicClass::SinglePoint: return "single_point";
    case ConicClass::SingleLine: return "single_line";
    case ConicClass::TwoLines: return "two_lines";
  }
  return "unknown";
}

const char* unique_reason_name(UniqueReason r) {
  switch (r) {
    case UniqueReason::GenericRank3: return "generic_rank3";
    case UniqueReason::EllipseSlice: return "ellipse_slice";
    case UniqueReason::ParabolaSlice: return "parabola_slice";
    case UniqueReason::TwoLinesSlice: return "two_lines_slice";
  }
  return "unknown";
}

Plane Plane::from_coefficients(double a, double b, double c, double d) {
  const double n = std::sqrt(a * a + b * b + c * c);
  if (!(n > 0.0)) {
    throw Error(Errc::InvalidArgument, "plane normal must be nonzero");
  }
  Plane p{a / n, b / n, c / n, d / n};
  double lead = 0.0;
  for (double v : {p.alpha, p.beta, p.gamma}) {
    if (std::abs(v) > 1e-12) {
      lead = v;
      break;
    }
  }
  if (lead < 0.0) {
    p.alpha = -p.alpha;
    p.beta = -p.beta;
    p.gamma = -p.gamma;
    p.delta = -p.delta;
  }
  return p;
}

namespace {

Eigen::MatrixXd centered_matrix(const std::vector<SymMat2>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = points[i].x;
    m(i, 1) = points[i].y;
    m(i, 2) = points[i].z;
  }
  m.rowwise() -= m.colwise().mean();
  return m;
}

double point_scale(const std::vector<SymMat2>& points) {
  double s = 0.0;
  for (const auto& p : points) {
    s = std::max({s, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  }
  return s;
}

// Quadratic form of the cone: y^2 - xz as P^T C P.
double cone_form(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return a.y() * b.y() - 0.5 * (a.x() * b.z() + a.z() * b.x());
}

struct SliceCoefficients {
  // q(s, t) = A s^2 + B s t + C t^2 + D s + E t + F on the plane
  double a, b, c, d, e, f;
  double discriminant;  // of the quadratic part
  double det_full;      // of the 3x3 conic matrix
};

SliceCoefficients slice_coefficients(const Plane& p) {
  const Eigen::Vector3d n(p.alpha, p.beta, p.gamma);
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  if (std::abs(n.y()) < std::abs(n.x())) axis = Eigen::Vector3d::UnitY();
  if (std::abs(n.z()) < std::min(std::abs(n.x()), std::abs(n.y()))) {
    axis = Eigen::Vector3d::UnitZ();
  }
  const Eigen::Vector3d u = n.cross(axis).normalized();
  const Eigen::Vector3d v = n.cross(u);
  const Eigen::Vector3d p0 = p.delta * n;

  SliceCoefficients s{};
  s.a = cone_form(u, u);
  s.b = 2.0 * cone_form(u, v);
  s.c = cone_form(v, v);
  s.d = 2.0 * cone_form(p0, u);
  s.e = 2.0 * cone_form(p0, v);
  s.f = cone_form(p0, p0);
  s.discriminant = s.b * s.b - 4.0 * s.a * s.c;
  Eigen::Matrix3d q;
  q << s.a, 0.5 * s.b, 0.5 * s.d,
       0.5 * s.b, s.c, 0.5 * s.e,
       0.5 * s.d, 0.5 * s.e, s.f;
  s.det_full = q.determinant();
  return s;
}

ConicClass classify(const SliceCoefficients& s, const Tolerances& tol) {
  const double qscale =
      std::max({std::abs(s.a), std::abs(s.b), std::abs(s.c)});
  const double fscale =
      std::max({qscale, std::abs(s.d), std::abs(s.e), std::abs(s.f)});
  const bool disc_zero =
      std::abs(s.discriminant) <= tol.eps_rank * qscale * qscale;
  const bool degenerate =
      std::abs(s.det_full) <= tol.eps_rank * fscale * fscale * fscale;
  if (disc_zero) {
    return degenerate ? ConicClass::SingleLine : ConicClass::Parabola;
  }
  if (s.discriminant > 0.0) {
    return degenerate ? ConicClass::TwoLines : ConicClass::Hyperbola;
  }
  return degenerate ? ConicClass::SinglePoint : ConicClass::Ellipse;
}

std::vector<SymMat2> deficits_of(const std::vector<Warp>& warps) {
  std::vector<SymMat2> out;
  out.reserve(warps.size());
  for (const auto& w : warps) out.push_back(gram_deficit(w));
  return out;
}

// Direction u (up to sign) for which the rank-one shift -k*u*u^T keeps the
// cone point p on the shifted cone for every k. On the cone the quadratic
// z*u1^2 - 2*y*u1*u2 + x*u2^2 has a double root.
Vec2 singular_shift_direction(const SymMat2& p) {
  const double n_yz = std::hypot(p.y, p.z);
  if (n_yz > 1e-14) return Vec2{p.y / n_yz, p.z / n_yz};
  const double n_xy = std::hypot(p.x, p.y);
  if (n_xy > 1e-14) return Vec2{p.x / n_xy, p.y / n_xy};
  return Vec2{0.0, 1.0};  // apex: any direction works, caller samples
}

Mat2 rank_one_shift_b(const Vec2& u, double kappa) {
  const SymMat2 m_prime{1.0 + kappa * u.x * u.x, kappa * u.x * u.y,
                        1.0 + kappa * u.y * u.y};
  return inverse(spd_sqrt(m_prime));
}

bool is_distinct(const std::vector<Mat2>& seen, const Mat2& b) {
  for (const auto& s : seen) {
    if (frobenius_distance(s, b) <= 1e-6) return false;
  }
  return true;
}

}  // namespace

int affine_rank(const std::vector<SymMat2>& points, const Tolerances& tol) {
  if (points.empty()) throw Error(Errc::EmptyInput, "no points");
  const Eigen::MatrixXd m = centered_matrix(points);
  const Eigen::VectorXd sv = m.jacobiSvd().singularValues();
  const double scale = std::max(1.0, point_scale(points));
  if (sv.size() == 0 || sv(0) <= tol.eps_rank * scale) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size() && i < 3; ++i) {
    if (sv(i) > tol.eps_rank * sv(0)) ++rank;
  }
  return rank;
}

Plane fit_plane(const std::vector<SymMat2>& points, const Tolerances& tol) {
  if (affine_rank(points, tol) != 2) {
    throw Error(Errc::RankMismatch, "points do not span a plane");
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = points[i].x;
    m(i, 1) = points[i].y;
    m(i, 2) = points[i].z;
  }
  const Eigen::RowVector3d mean = m.colwise().mean();
  m.rowwise() -= mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  const Eigen::Vector3d normal = svd.matrixV().col(2);
  return Plane::from_coefficients(normal.x(), normal.y(), normal.z(),
                                  normal.dot(mean.transpose()));
}

ConicClass slice_conic_class(const Plane& p, const Tolerances& tol) {
  return classify(slice_coefficients(p), tol);
}

std::optional<ConeShift> shift_from_plane(const Plane& p,
                                          const Tolerances& tol) {
  const double denom = 0.25 * p.beta * p.beta - p.alpha * p.gamma;
  if (std::abs(denom) <= tol.eps_cone) return std::nullopt;
  if (std::abs(p.delta) <= tol.eps_cone) return std::nullopt;
  const double t = p.delta / denom;
  return ConeShift{t * p.gamma, -0.5 * t * p.beta, t * p.alpha};
}

Mat2 b_from_shift(const ConeShift& s, const Tolerances& tol) {
  const SymMat2 m_prime{1.0 - s.a, -s.b, 1.0 - s.c};
  const auto ev = sym_eigenvalues(m_prime);
  if (ev[1] <= tol.eps_warp) {
    throw Error(Errc::NotPositiveDefinite,
                "I - shift is not positive definite");
  }
  return inverse(spd_sqrt(m_prime));
}

bool verify_alternative(const std::vector<Warp>& warps, const Mat2& b,
                        const Tolerances& tol) {
  const Mat2 btb_minus_i = transpose(b) * b - Mat2::identity();
  if (frobenius_norm(btb_minus_i) <= 10.0 * tol.eps_warp) return false;
  for (const auto& w : warps) {
    if (!is_valid_warp(w.matrix() * b, tol)) return false;
  }
  return true;
}

std::vector<Mat2> family_sample(const std::vector<Warp>& warps, int k,
                                std::uint64_t seed, const Tolerances& tol) {
  std::vector<Mat2> out;
  if (k <= 0 || warps.empty()) return out;
  const std::vector<SymMat2> points = deficits_of(warps);
  const int rank = affine_rank(points, tol);
  if (rank > 1) {
    throw Error(Errc::RankMismatch, "deficits are not degenerate");
  }

  SymMat2 mean{};
  for (const auto& p : points) {
    mean.x += p.x;
    mean.y += p.y;
    mean.z += p.z;
  }
  const double inv_n = 1.0 / static_cast<double>(points.size());
  mean.x *= inv_n;
  mean.y *= inv_n;
  mean.z *= inv_n;

  // Direction of the generator line: for rank 1 the principal direction of
  // the centered points, for rank 0 the deficit point itself.
  Vec2 u_fixed{0.0, 1.0};
  bool u_is_free = false;
  if (rank == 1) {
    const Eigen::MatrixXd m = centered_matrix(points);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const Eigen::Vector3d dir = svd.matrixV().col(0);
    u_fixed = singular_shift_direction(SymMat2{dir.x(), dir.y(), dir.z()});
  } else {
    const bool at_apex = frobenius_norm(mean) <= tol.eps_cone;
    u_is_free = at_apex;
    if (!at_apex) u_fixed = singular_shift_direction(mean);
  }

  Rng rng(seed);
  const bool point_off_apex = rank == 0 && !u_is_free;
  const int max_attempts = 64 * k + 128;
  for (int attempt = 0; attempt < max_attempts && (int)out.size() < k;
       ++attempt) {
    Mat2 candidate;
    bool built = false;
    if (point_off_apex && attempt % 2 == 1) {
      // General plane through the deficit point; its slice conic passes
      // through the point, so the derived shifted cone contains it.
      const double az = 2.0 * rng.next_double() - 1.0;
      const double ang = 2.0 * std::numbers::pi * rng.next_double();
      const double rr = std::sqrt(std::max(0.0, 1.0 - az * az));
      const double na = rr * std::cos(ang);
      const double nb = rr * std::sin(ang);
      const double nc = az;
      const double delta = na * mean.x + nb * mean.y + nc * mean.z;
      Plane plane;
      try {
        plane = Plane::from_coefficients(na, nb, nc, delta);
      } catch (const Error&) {
        continue;
      }
      const auto shift = shift_from_plane(plane, tol);
      if (!shift) continue;
      try {
        candidate = b_from_shift(*shift, tol);
        built = true;
      } catch (const Error&) {
        continue;
      }
    } else {
      Vec2 u = u_fixed;
      if (u_is_free) {
        const double ang = std::numbers::pi * rng.next_double();
        u = Vec2{std::cos(ang), std::sin(ang)};
      }
      const double kappa = 0.25 + 2.75 * rng.next_double();
      candidate = rank_one_shift_b(u, kappa);
      built = true;
    }
    if (built && verify_alternative(warps, candidate, tol) &&
        is_distinct(out, candidate)) {
      out.push_back(candidate);
    }
  }
  return out;
}

Verdict ambiguity_verdict(const std::vector<Warp>& warps,
                          const Tolerances& tol, std::uint64_t seed) {
  if (warps.empty()) throw Error(Errc::EmptyInput, "no warps");
  Verdict v;
  const std::vector<SymMat2> points = deficits_of(warps);
  v.affine_rank = affine_rank(points, tol);

  {
    const Eigen::VectorXd sv = centered_matrix(points).jacobiSvd().singularValues();
    for (Eigen::Index i = 0; i < sv.size() && i < 3; ++i) {
      v.margins["affine_sv" + std::to_string(i + 1)] = sv(i);
    }
  }

  if (v.affine_rank == 3) {
    v.ambiguous = false;
    v.reason = UniqueReason::GenericRank3;
    return v;
  }

  if (v.affine_rank == 2) {
    const Plane plane = fit_plane(points, tol);
    v.plane = plane;
    double max_dist = 0.0;
    for (const auto& p : points) {
      max_dist = std::max(max_dist,
                          std::abs(plane.alpha * p.x + plane.beta * p.y +
                                   plane.gamma * p.z - plane.delta));
    }
    v.margins["plane_residual"] = max_dist;
    const SliceCoefficients sc = slice_coefficients(plane);
    v.margins["conic_discriminant"] = sc.discriminant;
    v.margins["conic_det"] = sc.det_full;
    const ConicClass conic = classify(sc, tol);
    v.conic = conic;
    switch (conic) {
      case ConicClass::Hyperbola: {
        const auto shift = shift_from_plane(plane, tol);
        if (!shift) {
          throw Error(Errc::ConstructionFailed,
                      "hyperbola slice admits no cone shift");
        }
        Mat2 b;
        try {
          b = b_from_shift(*shift, tol);
        } catch (const Error&) {
          throw Error(Errc::ConstructionFailed,
                      "hyperbola shift yields no real B");
        }
        if (!verify_alternative(warps, b, tol)) {
          throw Error(Errc::ConstructionFailed,
                      "constructed B failed verification");
        }
        v.ambiguous = true;
        v.alternatives.push_back(b);
        return v;
      }
      case ConicClass::Ellipse:
        v.reason = UniqueReason::EllipseSlice;
        return v;
      case ConicClass::Parabola:
        v.reason = UniqueReason::ParabolaSlice;
        return v;
      case ConicClass::TwoLines:
        v.reason = UniqueReason::TwoLinesSlice;
        return v;
      default:
        throw Error(Errc::ConstructionFailed,
                    "rank-2 deficits classified as a degenerate conic");
    }
  }

  // Rank 0 or 1: degenerate conic, always ambiguous.
  v.conic = (v.affine_rank == 0) ? ConicClass::SinglePoint
                                 : ConicClass::SingleLine;
  v.alternatives = family_sample(warps, 3, seed, tol);
  if (v.alternatives.empty()) {
    throw Error(Errc::ConstructionFailed,
                "no verified alternative found for degenerate deficits");
  }
  v.ambiguous = true;
  return v;
}

}  // namespace texwarp
