#include "texwarp.h"

#include <cstring>
#include <memory>
#include <utility>
#include <vector>

#include "texwarp/cone.hpp"
#include "texwarp/recovery.hpp"
#include "texwarp/rng.hpp"
#include "texwarp/synthgen.hpp"
#include "texwarp/warp.hpp"

using namespace texwarp;

extern "C" {

struct tw_warpset {
  std::vector<Mat2> matrices;
};

struct tw_verdict {
  Verdict rep;
  std::vector<std::pair<std::string, double>> margins;  // stable order
};

struct tw_recovery {
  UpgradeResult rep;
};

struct tw_image {
  Image rep;
};

}  // extern "C"

namespace {

tw_status to_status(Errc e) {
  switch (e) {
    case Errc::InvalidArgument: return TW_ERR_INVALID_ARGUMENT;
    case Errc::NegativeDeterminant: return TW_ERR_NEGATIVE_DETERMINANT;
    case Errc::SingularValueMismatch: return TW_ERR_SINGULAR_VALUE_MISMATCH;
    case Errc::RankDeficient: return TW_ERR_RANK_DEFICIENT;
    case Errc::DomainError: return TW_ERR_DOMAIN;
    case Errc::NotPositiveDefinite: return TW_ERR_NOT_POSITIVE_DEFINITE;
    case Errc::RankMismatch: return TW_ERR_RANK_MISMATCH;
    case Errc::EmptyInput: return TW_ERR_EMPTY_INPUT;
    case Errc::ConstructionFailed: return TW_ERR_CONSTRUCTION_FAILED;
    case Errc::Inconsistent: return TW_ERR_INCONSISTENT;
    case Errc::Singular: return TW_ERR_SINGULAR;
    case Errc::ValidationFailed: return TW_ERR_VALIDATION_FAILED;
    case Errc::DegenerateInput: return TW_ERR_DEGENERATE_INPUT;
  }
  return TW_ERR_INTERNAL;
}

Mat2 from_array(const double m[4]) { return Mat2{m[0], m[1], m[2], m[3]}; }

void to_array(const Mat2& m, double out[4]) {
  out[0] = m.a11;
  out[1] = m.a12;
  out[2] = m.a21;
  out[3] = m.a22;
}

Tolerances from_tol(const tw_tolerances* tol) {
  if (tol == nullptr) return Tolerances{};
  return Tolerances{tol->eps_warp, tol->eps_cone, tol->eps_rank};
}

template <typename Fn>
tw_status guarded(Fn&& fn) {
  try {
    fn();
    return TW_OK;
  } catch (const Error& e) {
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    return TW_ERR_INTERNAL;
  } catch (const std::exception&) {
    return TW_ERR_INTERNAL;
  }
}

std::vector<Warp> validate_all(const tw_warpset* ws, const Tolerances& tol) {
  std::vector<Warp> out;
  out.reserve(ws->matrices.size());
  for (const auto& m : ws->matrices) out.push_back(validate(m, tol));
  return out;
}

}  // namespace

extern "C" {

const char* tw_status_string(tw_status status) {
  switch (status) {
    case TW_OK: return "ok";
    case TW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TW_ERR_NEGATIVE_DETERMINANT: return "negative determinant";
    case TW_ERR_SINGULAR_VALUE_MISMATCH: return "singular value mismatch";
    case TW_ERR_RANK_DEFICIENT: return "rank deficient";
    case TW_ERR_DOMAIN: return "domain error";
    case TW_ERR_NOT_POSITIVE_DEFINITE: return "not positive definite";
    case TW_ERR_RANK_MISMATCH: return "rank mismatch";
    case TW_ERR_EMPTY_INPUT: return "empty input";
    case TW_ERR_CONSTRUCTION_FAILED: return "construction failed";
    case TW_ERR_INCONSISTENT: return "inconsistent system";
    case TW_ERR_SINGULAR: return "singular matrix";
    case TW_ERR_VALIDATION_FAILED: return "validation failed";
    case TW_ERR_DEGENERATE_INPUT: return "degenerate input";
    case TW_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

tw_tolerances tw_default_tolerances(void) {
  const Tolerances t;
  return tw_tolerances{t.eps_warp, t.eps_cone, t.eps_rank};
}

tw_status tw_warp_compose(double theta1, double r, double theta2,
                          double out[4]) {
  if (out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    if (!(r > 0.0 && r <= 1.0)) {
      throw Error(Errc::DomainError, "r must be in (0, 1]");
    }
    to_array(compose(WarpFactors{theta1, r, theta2}), out);
  });
}

tw_status tw_warp_decompose(const double m[4], const tw_tolerances* tol,
                            double factors_out[3]) {
  if (m == nullptr || factors_out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const WarpFactors f = decompose(validate(from_array(m), from_tol(tol)));
    factors_out[0] = f.theta1;
    factors_out[1] = f.r;
    factors_out[2] = f.theta2;
  });
}

tw_status tw_warp_validate(const double m[4], const tw_tolerances* tol,
                           double factors_out[3]) {
  if (m == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const Warp w = validate(from_array(m), from_tol(tol));
    if (factors_out != nullptr) {
      const WarpFactors f = decompose(w);
      factors_out[0] = f.theta1;
      factors_out[1] = f.r;
      factors_out[2] = f.theta2;
    }
  });
}

tw_status tw_warp_gram_deficit(const double m[4], const tw_tolerances* tol,
                               double h_out[3]) {
  if (m == nullptr || h_out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const SymMat2 h = gram_deficit(validate(from_array(m), from_tol(tol)));
    h_out[0] = h.x;
    h_out[1] = h.y;
    h_out[2] = h.z;
  });
}

tw_status tw_cone_check(const double h[3], const tw_tolerances* tol,
                        int* on_cone, int* on_negative_semicone,
                        double* residual) {
  if (h == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const ConeCheck c = cone_check(SymMat2{h[0], h[1], h[2]}, from_tol(tol));
    if (on_cone != nullptr) *on_cone = c.on_cone ? 1 : 0;
    if (on_negative_semicone != nullptr) {
      *on_negative_semicone = c.on_negative_semicone ? 1 : 0;
    }
    if (residual != nullptr) *residual = c.residual;
  });
}

tw_status tw_warp_normal(const double m[4], const tw_tolerances* tol,
                         int branch, double n_out[3]) {
  if (m == nullptr || n_out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const Vec3 n =
        warp_to_normal(validate(from_array(m), from_tol(tol)), branch);
    n_out[0] = n.x;
    n_out[1] = n.y;
    n_out[2] = n.z;
  });
}

tw_status tw_warp_singular_values(const double m[4], double sv_out[2]) {
  if (m == nullptr || sv_out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  const Svd2 s = svd2(from_array(m));
  sv_out[0] = s.s1;
  sv_out[1] = std::abs(s.s2);
  return TW_OK;
}

double tw_rng_next(uint64_t* state) {
  Rng rng(*state);
  const double v = rng.next_double();
  *state = rng.state;
  return v;
}

tw_status tw_warpset_create(const double* matrices, size_t count,
                            tw_warpset** out) {
  if (matrices == nullptr || out == nullptr || count == 0) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto ws = std::make_unique<tw_warpset>();
    ws->matrices.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      ws->matrices.push_back(from_array(matrices + 4 * i));
    }
    *out = ws.release();
  });
}

void tw_warpset_destroy(tw_warpset* ws) { delete ws; }

size_t tw_warpset_count(const tw_warpset* ws) {
  return ws == nullptr ? 0 : ws->matrices.size();
}

tw_status tw_warpset_get(const tw_warpset* ws, size_t index, double out[4]) {
  if (ws == nullptr || out == nullptr || index >= ws->matrices.size()) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  to_array(ws->matrices[index], out);
  return TW_OK;
}

tw_status tw_hemisphere_warpset(double lambda, int n_radii, int n_angles,
                                double rho2_min, double rho2_max,
                                tw_warpset** out) {
  if (out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    HemisphereConfig cfg{lambda, n_radii, n_angles, rho2_min, rho2_max};
    auto ws = std::make_unique<tw_warpset>();
    for (const auto& s : hemisphere_samples(cfg)) {
      ws->matrices.push_back(s.warp.matrix());
    }
    *out = ws.release();
  });
}

tw_status tw_random_warpset(uint64_t seed, size_t n, double r_min,
                            const double* b, tw_warpset** observed_out,
                            tw_warpset** truth_out) {
  if (observed_out == nullptr || n == 0) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    Rng rng(seed);
    const Mat2 bm = (b != nullptr) ? from_array(b) : Mat2::identity();
    auto [truth, observed] =
        random_good_set(rng, static_cast<int>(n), bm, r_min);
    auto obs = std::make_unique<tw_warpset>();
    obs->matrices = std::move(observed.matrices);
    if (truth_out != nullptr) {
      auto tr = std::make_unique<tw_warpset>();
      for (const auto& w : truth) tr->matrices.push_back(w.matrix());
      *truth_out = tr.release();
    }
    *observed_out = obs.release();
  });
}

tw_status tw_analyze(const tw_warpset* ws, const tw_tolerances* tol,
                     uint64_t seed, tw_verdict** out) {
  if (ws == nullptr || out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const Tolerances t = from_tol(tol);
    const std::vector<Warp> warps = validate_all(ws, t);
    auto v = std::make_unique<tw_verdict>();
    v->rep = ambiguity_verdict(warps, t, seed);
    v->margins.assign(v->rep.margins.begin(), v->rep.margins.end());
    *out = v.release();
  });
}

void tw_verdict_destroy(tw_verdict* v) { delete v; }

int tw_verdict_is_ambiguous(const tw_verdict* v) {
  return (v != nullptr && v->rep.ambiguous) ? 1 : 0;
}

int tw_verdict_affine_rank(const tw_verdict* v) {
  return v == nullptr ? -1 : v->rep.affine_rank;
}

const char* tw_verdict_reason(const tw_verdict* v) {
  if (v == nullptr || !v->rep.reason) return "";
  return unique_reason_name(*v->rep.reason);
}

const char* tw_verdict_conic(const tw_verdict* v) {
  if (v == nullptr || !v->rep.conic) return "";
  return conic_name(*v->rep.conic);
}

int tw_verdict_has_plane(const tw_verdict* v) {
  return (v != nullptr && v->rep.plane.has_value()) ? 1 : 0;
}

tw_status tw_verdict_plane(const tw_verdict* v, double out[4]) {
  if (v == nullptr || out == nullptr || !v->rep.plane) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  out[0] = v->rep.plane->alpha;
  out[1] = v->rep.plane->beta;
  out[2] = v->rep.plane->gamma;
  out[3] = v->rep.plane->delta;
  return TW_OK;
}

size_t tw_verdict_alternative_count(const tw_verdict* v) {
  return v == nullptr ? 0 : v->rep.alternatives.size();
}

tw_status tw_verdict_alternative(const tw_verdict* v, size_t index,
                                 double out[4]) {
  if (v == nullptr || out == nullptr || index >= v->rep.alternatives.size()) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  to_array(v->rep.alternatives[index], out);
  return TW_OK;
}

size_t tw_verdict_margin_count(const tw_verdict* v) {
  return v == nullptr ? 0 : v->margins.size();
}

tw_status tw_verdict_margin(const tw_verdict* v, size_t index,
                            const char** name, double* value) {
  if (v == nullptr || index >= v->margins.size()) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  if (name != nullptr) *name = v->margins[index].first.c_str();
  if (value != nullptr) *value = v->margins[index].second;
  return TW_OK;
}

tw_status tw_hemisphere_alt_b(double lambda, double out[4]) {
  if (out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] { to_array(hemisphere_alt_b(lambda), out); });
}

tw_status tw_recover(const tw_warpset* ws, const tw_tolerances* tol,
                     tw_recovery** out) {
  if (ws == nullptr || out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto r = std::make_unique<tw_recovery>();
    r->rep = upgrade(GoodWarpSet{ws->matrices}, from_tol(tol));
    *out = r.release();
  });
}

void tw_recovery_destroy(tw_recovery* r) { delete r; }

const char* tw_recovery_variant(const tw_recovery* r) {
  if (r == nullptr) return "";
  switch (r->rep.metric.kind) {
    case MetricSolution::Kind::Unique: return "unique";
    case MetricSolution::Kind::Family: return "family";
    case MetricSolution::Kind::Underdetermined: return "underdetermined";
  }
  return "";
}

int tw_recovery_rank(const tw_recovery* r) {
  return r == nullptr ? -1 : r->rep.metric.rank;
}

double tw_recovery_residual(const tw_recovery* r) {
  return r == nullptr ? 0.0 : r->rep.metric.residual;
}

size_t tw_recovery_solution_count(const tw_recovery* r) {
  return r == nullptr ? 0 : r->rep.interpretations.size();
}

tw_status tw_recovery_solution(const tw_recovery* r, size_t index,
                               double m_out[3], double* d_out) {
  if (r == nullptr || index >= r->rep.interpretations.size()) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  const Interpretation& it = r->rep.interpretations[index];
  if (m_out != nullptr) {
    m_out[0] = it.metric.x;
    m_out[1] = it.metric.y;
    m_out[2] = it.metric.z;
  }
  if (d_out != nullptr) *d_out = it.d;
  return TW_OK;
}

tw_status tw_recovery_b(const tw_recovery* r, size_t index, double out[4]) {
  if (r == nullptr || out == nullptr ||
      index >= r->rep.interpretations.size()) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  to_array(r->rep.interpretations[index].b_hat, out);
  return TW_OK;
}

tw_status tw_recovery_warps(const tw_recovery* r, size_t index,
                            tw_warpset** out) {
  if (r == nullptr || out == nullptr ||
      index >= r->rep.interpretations.size()) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  const Interpretation& it = r->rep.interpretations[index];
  if (!it.warps_valid) return TW_ERR_VALIDATION_FAILED;
  return guarded([&] {
    auto ws = std::make_unique<tw_warpset>();
    for (const auto& w : it.warps) ws->matrices.push_back(w.matrix());
    *out = ws.release();
  });
}

tw_status tw_image_create(int width, int height, int channels,
                          const unsigned char* data, tw_image** out) {
  if (out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto img = std::make_unique<tw_image>();
    img->rep = Image(width, height, channels);
    if (data != nullptr) {
      std::memcpy(img->rep.data.data(), data, img->rep.data.size());
    }
    *out = img.release();
  });
}

void tw_image_destroy(tw_image* img) { delete img; }

int tw_image_width(const tw_image* img) {
  return img == nullptr ? 0 : img->rep.width;
}

int tw_image_height(const tw_image* img) {
  return img == nullptr ? 0 : img->rep.height;
}

int tw_image_channels(const tw_image* img) {
  return img == nullptr ? 0 : img->rep.channels;
}

const unsigned char* tw_image_data(const tw_image* img) {
  return img == nullptr ? nullptr : img->rep.data.data();
}

tw_status tw_builtin_square_element(tw_image** out) {
  if (out == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto img = std::make_unique<tw_image>();
    img->rep = builtin_square_element();
    *out = img.release();
  });
}

tw_status tw_render_warped(const tw_image* element, const double warp[4],
                           int out_size, double scale, tw_image** out) {
  if (element == nullptr || warp == nullptr || out == nullptr) {
    return TW_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto img = std::make_unique<tw_image>();
    img->rep = render_warped_element(element->rep, from_array(warp), out_size,
                                     scale);
    *out = img.release();
  });
}

tw_status tw_paint_hemisphere(double lambda, int n_radii, int n_angles,
                              double rho2_min, double rho2_max,
                              const tw_image* element, tw_image** composite,
                              tw_image** normals_true, tw_image** normals_alt,
                              tw_image** element_alt) {
  if (element == nullptr) return TW_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    HemisphereConfig cfg{lambda, n_radii, n_angles, rho2_min, rho2_max};
    HemisphereImages imgs = paint_hemisphere(cfg, element->rep);
    auto hand_out = [](Image&& img, tw_image** slot) {
      if (slot == nullptr) return;
      auto h = std::make_unique<tw_image>();
      h->rep = std::move(img);
      *slot = h.release();
    };
    hand_out(std::move(imgs.composite), composite);
    hand_out(std::move(imgs.normal_map_true), normals_true);
    hand_out(std::move(imgs.normal_map_alt), normals_alt);
    hand_out(std::move(imgs.element_alt), element_alt);
  });
}

}  // extern "C"
