#include "texwarp/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace texwarp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCompositeSize = 512;
constexpr int kPatchSize = 64;
constexpr double kWorldExtent = 1.1;  // composite covers [-1.1, 1.1]^2
constexpr double kRimCutoff = 1.0 - 1e-6;

double rho2_of(double x, double y) { return x * x + y * y; }

}  // namespace

HemisphereConfig HemisphereConfig::with_defaults(double lambda, int n_radii,
                                                 int n_angles) {
  HemisphereConfig cfg;
  cfg.lambda = lambda;
  cfg.n_radii = n_radii;
  cfg.n_angles = n_angles;
  cfg.rho2_min = lambda + 0.05;
  cfg.rho2_max = 0.95;
  cfg.check();
  return cfg;
}

void HemisphereConfig::check() const {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(Errc::DomainError,
                "lambda must be in (0, 1), got " + std::to_string(lambda));
  }
  if (n_radii < 1 || n_angles < 1) {
    throw Error(Errc::DomainError, "grid counts must be positive");
  }
  if (!(lambda <= rho2_min && rho2_min < rho2_max && rho2_max < 1.0)) {
    throw Error(Errc::DomainError,
                "need lambda <= rho2_min < rho2_max < 1");
  }
}

double phi(double x, double y, double lambda) {
  const double rho2 = rho2_of(x, y);
  if (!(rho2 >= lambda && rho2 <= 1.0)) {
    throw Error(Errc::DomainError,
                "(x, y) outside the annulus lambda <= x^2+y^2 <= 1");
  }
  const double ratio = std::min(1.0, lambda / rho2);
  return 0.5 * std::acos(ratio);
}

Warp hemisphere_warp(double x, double y, double lambda) {
  const double rho2 = rho2_of(x, y);
  if (!(rho2 >= lambda && rho2 < 1.0) || rho2 == 0.0) {
    throw Error(Errc::DomainError,
                "(x, y) outside the annulus lambda <= x^2+y^2 < 1");
  }
  const double rho = std::sqrt(rho2);
  const double z = std::sqrt(1.0 - rho2);
  const Mat2 left{x / rho, y / rho, -y / rho, x / rho};
  const Mat2 t = left * Mat2::diagonal(1.0, z) * rotation(phi(x, y, lambda));
  return Warp::unchecked(t);
}

Mat2 hemisphere_alt_b(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(Errc::DomainError, "lambda must be in (0, 1)");
  }
  return Mat2::diagonal(1.0 / std::sqrt(1.0 + lambda),
                        1.0 / std::sqrt(1.0 - lambda));
}

std::vector<SurfaceSample> hemisphere_samples(const HemisphereConfig& cfg) {
  cfg.check();
  std::vector<SurfaceSample> out;
  out.reserve(static_cast<std::size_t>(cfg.n_radii) * cfg.n_angles);
  for (int j = 0; j < cfg.n_radii; ++j) {
    const double frac =
        (cfg.n_radii == 1) ? 0.0
                           : static_cast<double>(j) / (cfg.n_radii - 1);
    const double rho2 = cfg.rho2_min + frac * (cfg.rho2_max - cfg.rho2_min);
    const double rho = std::sqrt(rho2);
    for (int k = 0; k < cfg.n_angles; ++k) {
      const double ang = kTwoPi * k / cfg.n_angles;
      SurfaceSample s;
      s.x = rho * std::cos(ang);
      s.y = rho * std::sin(ang);
      s.z = std::sqrt(1.0 - rho2);
      s.warp = hemisphere_warp(s.x, s.y, cfg.lambda);
      s.normal_plus = warp_to_normal(s.warp, +1);
      s.normal_minus = warp_to_normal(s.warp, -1);
      out.push_back(s);
    }
  }
  return out;
}

Warp random_warp(Rng& rng, double r_min) {
  if (!(r_min > 0.0 && r_min <= 1.0)) {
    throw Error(Errc::DomainError, "r_min must be in (0, 1]");
  }
  const double theta1 = kTwoPi * rng.next_double();
  const double r = r_min + (1.0 - r_min) * rng.next_double();
  const double theta2 = kTwoPi * rng.next_double();
  return Warp::unchecked(
      compose(WarpFactors{theta1, r, theta2}));
}

std::pair<std::vector<Warp>, GoodWarpSet> random_good_set(Rng& rng, int n,
                                                          const Mat2& b,
                                                          double r_min) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (!(det(b) > 0.0)) {
    throw Error(Errc::NegativeDeterminant, "B must have positive determinant");
  }
  std::vector<Warp> truth;
  GoodWarpSet observed;
  truth.reserve(n);
  observed.matrices.reserve(n);
  for (int i = 0; i < n; ++i) {
    truth.push_back(random_warp(rng, r_min));
    observed.matrices.push_back(truth.back().matrix() * b);
  }
  return {std::move(truth), std::move(observed)};
}

Image render_warped_element(const Image& element, const Mat2& w, int out_size,
                            double scale) {
  if (element.data.empty() || out_size <= 0 || !(scale > 0.0)) {
    throw Error(Errc::InvalidArgument, "bad render arguments");
  }
  const double d = det(w);
  if (std::abs(d) <= 1e-14 * std::max(1.0, frobenius_norm(w))) {
    throw Error(Errc::Singular, "warp is numerically singular");
  }
  const Mat2 w_inv = inverse(w);
  Image out(out_size, out_size, element.channels, 255);
  const double half = 0.5 * out_size;
  const double cx = 0.5 * (element.width - 1);
  const double cy = 0.5 * (element.height - 1);
  for (int iy = 0; iy < out_size; ++iy) {
    for (int ix = 0; ix < out_size; ++ix) {
      const Vec2 p{(ix + 0.5 - half) / scale, (iy + 0.5 - half) / scale};
      const Vec2 s = w_inv * p;
      const double ex = cx + s.x;
      const double ey = cy + s.y;
      const int x0 = static_cast<int>(std::floor(ex));
      const int y0 = static_cast<int>(std::floor(ey));
      const double fx = ex - x0;
      const double fy = ey - y0;
      for (int c = 0; c < element.channels; ++c) {
        auto sample = [&](int x, int y) -> double {
          if (x < 0 || y < 0 || x >= element.width || y >= element.height) {
            return 255.0;
          }
          return element.at(x, y, c);
        };
        const double v =
            (1.0 - fx) * (1.0 - fy) * sample(x0, y0) +
            fx * (1.0 - fy) * sample(x0 + 1, y0) +
            (1.0 - fx) * fy * sample(x0, y0 + 1) +
            fx * fy * sample(x0 + 1, y0 + 1);
        out.at(ix, iy, c) =
            static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

std::uint8_t encode_normal_channel(double component) {
  const long v = std::lround(255.0 * (component + 1.0) / 2.0);
  return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

Image builtin_square_element() {
  // 33x33 gray image: white background, black square outline.
  Image img(33, 33, 1, 255);
  const int lo = 6, hi = 26, thick = 3;
  for (int y = lo; y <= hi; ++y) {
    for (int x = lo; x <= hi; ++x) {
      const bool on_border = x < lo + thick || x > hi - thick ||
                             y < lo + thick || y > hi - thick;
      if (on_border) img.at(x, y, 0) = 0;
    }
  }
  return img;
}

namespace {

void blit(Image& dst, const Image& patch, int px, int py) {
  for (int y = 0; y < patch.height; ++y) {
    const int dy = py + y - patch.height / 2;
    if (dy < 0 || dy >= dst.height) continue;
    for (int x = 0; x < patch.width; ++x) {
      const int dx = px + x - patch.width / 2;
      if (dx < 0 || dx >= dst.width) continue;
      for (int c = 0; c < dst.channels; ++c) {
        dst.at(dx, dy, c) = patch.at(x, y, c);
      }
    }
  }
}

void fill_normal_map(Image& map, double lambda, const Mat2* right_factor) {
  // Background is the frontal normal (0, 0, 1) so that every pixel of the
  // map decodes to a unit vector.
  for (int iy = 0; iy < map.height; ++iy) {
    for (int ix = 0; ix < map.width; ++ix) {
      map.at(ix, iy, 0) = encode_normal_channel(0.0);
      map.at(ix, iy, 1) = encode_normal_channel(0.0);
      map.at(ix, iy, 2) = encode_normal_channel(1.0);
    }
  }
  for (int iy = 0; iy < map.height; ++iy) {
    for (int ix = 0; ix < map.width; ++ix) {
      const double x =
          ((ix + 0.5) / map.width * 2.0 - 1.0) * kWorldExtent;
      const double y =
          ((iy + 0.5) / map.height * 2.0 - 1.0) * kWorldExtent;
      const double rho2 = rho2_of(x, y);
      if (rho2 < lambda || rho2 > kRimCutoff) continue;  // stays frontal
      Mat2 m = hemisphere_warp(x, y, lambda).matrix();
      if (right_factor != nullptr) m = m * (*right_factor);
      const Vec3 n = warp_to_normal(Warp::unchecked(m), +1);
      map.at(ix, iy, 0) = encode_normal_channel(n.x);
      map.at(ix, iy, 1) = encode_normal_channel(n.y);
      map.at(ix, iy, 2) = encode_normal_channel(n.z);
    }
  }
}

}  // namespace

HemisphereImages paint_hemisphere(const HemisphereConfig& cfg,
                                  const Image& element) {
  cfg.check();
  const double patch_scale =
      static_cast<double>(kPatchSize) /
      (1.6 * std::max(element.width, element.height));

  HemisphereImages out{
      Image(kCompositeSize, kCompositeSize, element.channels, 255),
      Image(kCompositeSize, kCompositeSize, 3, 255),
      Image(kCompositeSize, kCompositeSize, 3, 255),
      Image(2 * kPatchSize, 2 * kPatchSize, element.channels, 255)};

  // Back to front: the outer rings of the hemisphere are farther away.
  std::vector<SurfaceSample> samples = hemisphere_samples(cfg);
  std::stable_sort(samples.begin(), samples.end(),
                   [](const SurfaceSample& a, const SurfaceSample& b) {
                     return rho2_of(a.x, a.y) > rho2_of(b.x, b.y);
                   });
  for (const auto& s : samples) {
    const Image patch = render_warped_element(element, s.warp.matrix(),
                                              kPatchSize, patch_scale);
    const int px = static_cast<int>(
        std::lround((s.x + kWorldExtent) / (2.0 * kWorldExtent) *
                    kCompositeSize));
    const int py = static_cast<int>(
        std::lround((s.y + kWorldExtent) / (2.0 * kWorldExtent) *
                    kCompositeSize));
    blit(out.composite, patch, px, py);
  }

  const Mat2 b_alt = hemisphere_alt_b(cfg.lambda);
  fill_normal_map(out.normal_map_true, cfg.lambda, nullptr);
  fill_normal_map(out.normal_map_alt, cfg.lambda, &b_alt);

  out.element_alt = render_warped_element(element, inverse(b_alt),
                                          2 * kPatchSize, 2.0 * patch_scale);
  return out;
}

}  // namespace texwarp
