#include <cmath>
#include <numbers>

#include "doctest.h"
#include "texwarp/rng.hpp"
#include "texwarp/warp.hpp"

using namespace texwarp;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle for the singular values of a 2x2 matrix: square roots
// of the eigenvalues of A^T A, computed from scratch.
void singular_values_oracle(const Mat2& a, double* s1, double* s2) {
  const double g11 = a.a11 * a.a11 + a.a21 * a.a21;
  const double g12 = a.a11 * a.a12 + a.a21 * a.a22;
  const double g22 = a.a12 * a.a12 + a.a22 * a.a22;
  const double mean = 0.5 * (g11 + g22);
  const double rad =
      std::sqrt(0.25 * (g11 - g22) * (g11 - g22) + g12 * g12);
  *s1 = std::sqrt(mean + rad);
  *s2 = std::sqrt(std::max(0.0, mean - rad));
}

Warp make(double theta1, double r, double theta2) {
  return Warp::unchecked(compose(WarpFactors{theta1, r, theta2}));
}

}  // namespace

TEST_CASE("compose matches direct multiplication") {
  const Mat2 m = compose(WarpFactors{kPi / 2.0, 0.5, 0.0});
  CHECK(std::abs(m.a11) < 1e-12);
  CHECK(m.a12 == doctest::Approx(-0.5));
  CHECK(m.a21 == doctest::Approx(1.0));
  CHECK(std::abs(m.a22) < 1e-12);

  const Mat2 id = compose(WarpFactors{0.0, 1.0, 0.0});
  CHECK(frobenius_distance(id, Mat2::identity()) == 0.0);

  const Mat2 half = compose(WarpFactors{0.0, 0.5, 0.0});
  CHECK(frobenius_distance(half, Mat2::diagonal(1.0, 0.5)) == 0.0);
}

TEST_CASE("decompose recovers canonical factors") {
  const Mat2 m{0.0, -0.5, 1.0, 0.0};
  const WarpFactors f = decompose(Warp::unchecked(m));
  CHECK(f.theta1 == doctest::Approx(kPi / 2.0));
  CHECK(f.r == doctest::Approx(0.5));
  CHECK(std::abs(f.theta2) < 1e-12);

  const WarpFactors id = decompose(Warp::unchecked(Mat2::identity()));
  CHECK(id.theta1 == 0.0);
  CHECK(id.r == 1.0);
  CHECK(id.theta2 == 0.0);
}

TEST_CASE("decompose round trip and factor ranges") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double theta1 = 2.0 * kPi * rng.next_double();
    const double r = 0.05 + 0.95 * rng.next_double();
    const double theta2 = 2.0 * kPi * rng.next_double();
    const Warp w = make(theta1, r, theta2);

    const WarpFactors f = decompose(w);
    CHECK(f.theta1 >= 0.0);
    CHECK(f.theta1 < kPi);
    CHECK(f.r > 0.0);
    CHECK(f.r <= 1.0);
    CHECK(f.theta2 >= 0.0);
    CHECK(f.theta2 < 2.0 * kPi);

    const Mat2 back = compose(f);
    CHECK(frobenius_distance(back, w.matrix()) < 1e-12);

    double s1 = 0.0, s2 = 0.0;
    singular_values_oracle(w.matrix(), &s1, &s2);
    CHECK(std::abs(s1 - 1.0) < 1e-12);
    CHECK(f.r == doctest::Approx(s2).epsilon(1e-10));
  }
}

TEST_CASE("validate accepts warps and names rejections") {
  const Tolerances tol;
  CHECK_NOTHROW(validate(Mat2::identity(), tol));
  CHECK_NOTHROW(validate(Mat2{0.0, -0.5, 1.0, 0.0}, tol));

  try {
    validate(Mat2::diagonal(1.0, -0.5), tol);
    FAIL("expected NegativeDeterminant");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NegativeDeterminant);
  }

  try {
    validate(Mat2::diagonal(1.0, 1.2), tol);
    FAIL("expected SingularValueMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularValueMismatch);
  }

  try {
    validate(Mat2::diagonal(1.0, 0.0), tol);
    FAIL("expected rejection of a singular matrix");
  } catch (const Error& e) {
    CHECK((e.code() == Errc::RankDeficient ||
           e.code() == Errc::NegativeDeterminant));
  }

  CHECK(is_valid_warp(Mat2::identity(), tol));
  CHECK_FALSE(is_valid_warp(Mat2::diagonal(1.0, 1.2), tol));
  CHECK_FALSE(is_valid_warp(2.0 * Mat2::identity(), tol));
}

TEST_CASE("gram deficit lands on the negative semicone") {
  const SymMat2 h = gram_deficit(Warp::unchecked(Mat2::diagonal(1.0, 0.5)));
  CHECK(h.x == 0.0);
  CHECK(h.y == 0.0);
  CHECK(h.z == doctest::Approx(-0.75));

  Rng rng(11);
  const Tolerances tol;
  for (int i = 0; i < 2000; ++i) {
    const Warp w = make(2.0 * kPi * rng.next_double(),
                        0.05 + 0.95 * rng.next_double(),
                        2.0 * kPi * rng.next_double());
    const SymMat2 d = gram_deficit(w);
    // det(W^T W - I) = 0 is the cone equation y^2 = xz in disguise.
    CHECK(std::abs(d.x * d.z - d.y * d.y) < 1e-9);
    CHECK(d.x <= 1e-12);
    CHECK(d.z <= 1e-12);
    const ConeCheck c = cone_check(d, tol);
    CHECK(c.on_cone);
    CHECK(c.on_negative_semicone);
  }
}

TEST_CASE("cone check on pinned points") {
  const Tolerances tol;

  const ConeCheck apex = cone_check(SymMat2{0.0, 0.0, 0.0}, tol);
  CHECK(apex.on_cone);
  CHECK(apex.on_negative_semicone);
  CHECK(apex.residual == 0.0);

  const ConeCheck axis = cone_check(SymMat2{0.0, 0.0, -0.75}, tol);
  CHECK(axis.on_cone);
  CHECK(axis.on_negative_semicone);
  CHECK(axis.residual == 0.0);

  // Hemisphere deficit at rho^2 = 0.75, lambda = 0.5; y = -0.5 sqrt(0.3125)
  // is approximately -0.2795085.
  const double y_hemi = -0.5 * std::sqrt(0.3125);
  CHECK(y_hemi == doctest::Approx(-0.2795085));
  const ConeCheck hemi = cone_check(SymMat2{-0.125, y_hemi, -0.625}, tol);
  CHECK(std::abs(hemi.residual) <= 1e-9);
  CHECK(hemi.on_cone);
  CHECK(hemi.on_negative_semicone);

  const ConeCheck positive = cone_check(SymMat2{0.5, 0.5, 0.5}, tol);
  CHECK(positive.on_cone);
  CHECK_FALSE(positive.on_negative_semicone);

  const ConeCheck off = cone_check(SymMat2{-0.5, 0.1, -0.5}, tol);
  CHECK_FALSE(off.on_cone);
  CHECK(off.residual == doctest::Approx(0.1 * 0.1 - 0.25));
}

TEST_CASE("warp normal on pinned warps") {
  const Vec3 n1 = warp_to_normal(Warp::unchecked(Mat2::diagonal(1.0, 0.5)), +1);
  CHECK(std::abs(n1.x) < 1e-12);
  CHECK(n1.y == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(n1.z == doctest::Approx(0.5));

  const Vec3 n2 = warp_to_normal(make(kPi / 2.0, 0.5, 0.0), +1);
  CHECK(n2.x == doctest::Approx(-std::sqrt(3.0) / 2.0));
  CHECK(std::abs(n2.y) < 1e-12);
  CHECK(n2.z == doctest::Approx(0.5));

  const Vec3 n2m = warp_to_normal(make(kPi / 2.0, 0.5, 0.0), -1);
  CHECK(n2m.x == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(n2m.z == doctest::Approx(0.5));
}

TEST_CASE("warp normal is a unit vector with positive height") {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Warp w = make(2.0 * kPi * rng.next_double(),
                        0.05 + 0.95 * rng.next_double(),
                        2.0 * kPi * rng.next_double());
    for (int branch : {+1, -1}) {
      const Vec3 n = warp_to_normal(w, branch);
      CHECK(std::abs(n.x * n.x + n.y * n.y + n.z * n.z - 1.0) < 1e-12);
      CHECK(n.z > 0.0);
      // z equals the foreshortening.
      CHECK(n.z == doctest::Approx(decompose(w).r));
    }
  }
}
