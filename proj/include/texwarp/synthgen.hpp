#ifndef TEXWARP_SYNTHGEN_HPP
#define TEXWARP_SYNTHGEN_HPP

#include <vector>

#include "texwarp/image.hpp"
#include "texwarp/recovery.hpp"
#include "texwarp/rng.hpp"
#include "texwarp/warp.hpp"

namespace texwarp {

/// Truncated-hemisphere example: texture elements cover the annulus
/// lambda <= x^2 + y^2 <= rho2_max of the unit hemisphere.
struct HemisphereConfig {
  double lambda = 0.5;
  int n_radii = 5;
  int n_angles = 8;
  double rho2_min = 0.55;
  double rho2_max = 0.95;

  static HemisphereConfig with_defaults(double lambda, int n_radii = 5,
                                        int n_angles = 8);
  void check() const;  // throws DomainError on bad ranges
};

struct SurfaceSample {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;  // sqrt(1 - x^2 - y^2)
  Warp warp = Warp::unchecked(Mat2::identity());
  Vec3 normal_plus;
  Vec3 normal_minus;
};

struct HemisphereImages {
  Image composite;
  Image normal_map_true;
  Image normal_map_alt;
  Image element_alt;
};

/// Tangent orientation field phi = 0.5 * acos(lambda / rho^2), in [0, pi/4].
double phi(double x, double y, double lambda);

/// The conspiratorial warp of the hemisphere example; foreshortening equals
/// the surface height and the Gram deficit lands on the plane x - z = lambda.
Warp hemisphere_warp(double x, double y, double lambda);

/// diag(1/sqrt(1+lambda), 1/sqrt(1-lambda)): the non-rotational B that
/// re-explains every hemisphere warp.
Mat2 hemisphere_alt_b(double lambda);

std::vector<SurfaceSample> hemisphere_samples(const HemisphereConfig& cfg);

Warp random_warp(Rng& rng, double r_min);

/// Ground-truth warps {T_i} plus the observed set {T_i B}.
std::pair<std::vector<Warp>, GoodWarpSet> random_good_set(Rng& rng, int n,
                                                          const Mat2& b,
                                                          double r_min);

/// Inverse-mapped bilinear resampling of the element under the warp; output
/// pixel centers are taken relative to the patch center and divided by
/// scale. Out-of-element samples are white.
Image render_warped_element(const Image& element, const Mat2& w, int out_size,
                            double scale);

/// Normal encoding used by the normal maps: round(255 * (n + 1) / 2),
/// halves away from zero.
std::uint8_t encode_normal_channel(double component);

Image builtin_square_element();

HemisphereImages paint_hemisphere(const HemisphereConfig& cfg,
                                  const Image& element);

}  // namespace texwarp

#endif
