// texwarp command-line tool. All numerics go through the C API; this file
// only does flag parsing, JSON and PNM serialization, and exit codes:
//   0 success, 1 I/O or parse error, 2 validation failure,
//   3 construction failure, 4 inconsistent or underdetermined system.
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnm.hpp"
#include "texwarp.h"

namespace {

using json = nlohmann::json;
using Mat = std::array<double, 4>;

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitInconsistent = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

struct WarpsetDeleter {
  void operator()(tw_warpset* p) const { tw_warpset_destroy(p); }
};
struct VerdictDeleter {
  void operator()(tw_verdict* p) const { tw_verdict_destroy(p); }
};
struct RecoveryDeleter {
  void operator()(tw_recovery* p) const { tw_recovery_destroy(p); }
};
struct ImageDeleter {
  void operator()(tw_image* p) const { tw_image_destroy(p); }
};
using WarpsetPtr = std::unique_ptr<tw_warpset, WarpsetDeleter>;
using VerdictPtr = std::unique_ptr<tw_verdict, VerdictDeleter>;
using RecoveryPtr = std::unique_ptr<tw_recovery, RecoveryDeleter>;
using ImagePtr = std::unique_ptr<tw_image, ImageDeleter>;

tw_tolerances make_tolerances(double tol) {
  tw_tolerances t = tw_default_tolerances();
  t.eps_warp = tol;
  t.eps_cone = tol;
  return t;
}

json matrix_to_json(const Mat& m) {
  return json::array({json::array({m[0], m[1]}), json::array({m[2], m[3]})});
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() ||
      !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2) {
    fail(kExitIo, "each warp must be a 2x2 numeric matrix");
  }
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (!j[r][c].is_number()) {
        fail(kExitIo, "warp entries must be numbers");
      }
    }
  }
  return Mat{j[0][0], j[0][1], j[1][0], j[1][1]};
}

std::vector<Mat> load_warp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kExitIo, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(kExitIo, path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("warps") ||
      !doc["warps"].is_array() || doc["warps"].empty()) {
    fail(kExitIo, path + ": expected {\"warps\": [2x2 matrices, ...]}");
  }
  std::vector<Mat> out;
  for (const auto& entry : doc["warps"]) out.push_back(matrix_from_json(entry));
  return out;
}

WarpsetPtr to_warpset(const std::vector<Mat>& mats) {
  tw_warpset* ws = nullptr;
  const tw_status st =
      tw_warpset_create(mats.front().data(), mats.size(), &ws);
  if (st != TW_OK) fail(kExitIo, tw_status_string(st));
  return WarpsetPtr(ws);
}

std::vector<Mat> from_warpset(const tw_warpset* ws) {
  std::vector<Mat> out(tw_warpset_count(ws));
  for (size_t i = 0; i < out.size(); ++i) {
    tw_warpset_get(ws, i, out[i].data());
  }
  return out;
}

Mat parse_matrix_flag(const std::string& text) {
  std::istringstream in(text);
  Mat m{};
  for (double& v : m) {
    if (!(in >> v)) {
      fail(kExitIo, "matrix flag needs four whitespace-separated reals");
    }
  }
  std::string leftover;
  if (in >> leftover) fail(kExitIo, "matrix flag has trailing input");
  return m;
}

void write_json(const std::string& path, const json& doc) {
  if (path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) fail(kExitIo, "cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
  if (!out) fail(kExitIo, "short write to " + path);
}

json warp_file_json(const std::vector<Mat>& mats, json meta) {
  json warps = json::array();
  for (const auto& m : mats) warps.push_back(matrix_to_json(m));
  return json{{"warps", warps}, {"meta", std::move(meta)}};
}

const char* validation_reason(tw_status st) {
  switch (st) {
    case TW_ERR_NEGATIVE_DETERMINANT: return "NegativeDeterminant";
    case TW_ERR_SINGULAR_VALUE_MISMATCH: return "SingularValueMismatch";
    case TW_ERR_RANK_DEFICIENT: return "RankDeficient";
    default: return tw_status_string(st);
  }
}

ImagePtr load_element(const std::string& spec) {
  tw_image* img = nullptr;
  if (spec == "builtin-square") {
    tw_builtin_square_element(&img);
    return ImagePtr(img);
  }
  pnm::Raster raster;
  try {
    raster = pnm::read(spec);
  } catch (const std::exception& e) {
    fail(kExitIo, e.what());
  }
  const tw_status st = tw_image_create(raster.width, raster.height,
                                       raster.channels, raster.data.data(),
                                       &img);
  if (st != TW_OK) fail(kExitIo, tw_status_string(st));
  return ImagePtr(img);
}

void write_image(const std::string& path, const tw_image* img) {
  pnm::Raster raster;
  raster.width = tw_image_width(img);
  raster.height = tw_image_height(img);
  raster.channels = tw_image_channels(img);
  const unsigned char* data = tw_image_data(img);
  raster.data.assign(data, data + static_cast<std::size_t>(raster.width) *
                                     raster.height * raster.channels);
  try {
    pnm::write(path, raster);
  } catch (const std::exception& e) {
    fail(kExitIo, e.what());
  }
}

json empty_report() {
  return json{{"verdict", nullptr},      {"reason", nullptr},
              {"affine_rank", nullptr},  {"plane", nullptr},
              {"conic", nullptr},        {"alternatives", json::array()},
              {"metric_solutions", json::array()},
              {"recovered_warps", json::array()},
              {"margins", json::object()}};
}

int cmd_validate(const std::string& input, double tol) {
  const std::vector<Mat> mats = load_warp_file(input);
  const tw_tolerances t = make_tolerances(tol);
  bool all_valid = true;
  for (size_t i = 0; i < mats.size(); ++i) {
    double factors[3];
    const tw_status st = tw_warp_validate(mats[i].data(), &t, factors);
    if (st == TW_OK) {
      std::printf("warp %zu: theta1=%.12g r=%.12g theta2=%.12g\n", i,
                  factors[0], factors[1], factors[2]);
    } else {
      all_valid = false;
      double sv[2];
      tw_warp_singular_values(mats[i].data(), sv);
      std::printf("warp %zu: %s (sigma_max=%.12g sigma_min=%.12g)\n", i,
                  validation_reason(st), sv[0], sv[1]);
    }
  }
  return all_valid ? 0 : kExitInvalid;
}

int cmd_analyze(const std::string& input, double tol, std::uint64_t seed,
                const std::string& output) {
  const std::vector<Mat> mats = load_warp_file(input);
  WarpsetPtr ws = to_warpset(mats);
  const tw_tolerances t = make_tolerances(tol);
  tw_verdict* raw = nullptr;
  const tw_status st = tw_analyze(ws.get(), &t, seed, &raw);
  if (st == TW_ERR_CONSTRUCTION_FAILED) {
    fail(kExitConstruction, tw_status_string(st));
  }
  if (st != TW_OK) fail(kExitInvalid, tw_status_string(st));
  VerdictPtr verdict(raw);

  json report = empty_report();
  report["verdict"] =
      tw_verdict_is_ambiguous(verdict.get()) ? "ambiguous" : "unique";
  const std::string reason = tw_verdict_reason(verdict.get());
  if (!reason.empty()) report["reason"] = reason;
  report["affine_rank"] = tw_verdict_affine_rank(verdict.get());
  const std::string conic = tw_verdict_conic(verdict.get());
  if (!conic.empty()) report["conic"] = conic;
  if (tw_verdict_has_plane(verdict.get())) {
    double p[4];
    tw_verdict_plane(verdict.get(), p);
    report["plane"] = json::array({p[0], p[1], p[2], p[3]});
  }
  for (size_t i = 0; i < tw_verdict_alternative_count(verdict.get()); ++i) {
    Mat alt;
    tw_verdict_alternative(verdict.get(), i, alt.data());
    report["alternatives"].push_back(matrix_to_json(alt));
  }
  for (size_t i = 0; i < tw_verdict_margin_count(verdict.get()); ++i) {
    const char* name = nullptr;
    double value = 0.0;
    tw_verdict_margin(verdict.get(), i, &name, &value);
    report["margins"][name] = value;
  }
  write_json(output, report);
  return 0;
}

int cmd_recover(const std::string& input, double tol,
                const std::string& output) {
  const std::vector<Mat> mats = load_warp_file(input);
  WarpsetPtr ws = to_warpset(mats);
  const tw_tolerances t = make_tolerances(tol);
  tw_recovery* raw = nullptr;
  const tw_status st = tw_recover(ws.get(), &t, &raw);
  if (st == TW_ERR_INCONSISTENT || st == TW_ERR_RANK_DEFICIENT ||
      st == TW_ERR_VALIDATION_FAILED) {
    fail(kExitInconsistent, tw_status_string(st));
  }
  if (st != TW_OK) fail(kExitInvalid, tw_status_string(st));
  RecoveryPtr rec(raw);

  json report = empty_report();
  report["verdict"] = tw_recovery_variant(rec.get());
  report["rank"] = tw_recovery_rank(rec.get());
  report["residual"] = tw_recovery_residual(rec.get());
  bool have_recovered = false;
  for (size_t i = 0; i < tw_recovery_solution_count(rec.get()); ++i) {
    double m[3];
    double d = 0.0;
    Mat b;
    tw_recovery_solution(rec.get(), i, m, &d);
    tw_recovery_b(rec.get(), i, b.data());
    json sol{{"M", json::array({json::array({m[0], m[1]}),
                                json::array({m[1], m[2]})})},
             {"d", d},
             {"residual", tw_recovery_residual(rec.get())},
             {"B", matrix_to_json(b)}};
    tw_warpset* recovered = nullptr;
    if (tw_recovery_warps(rec.get(), i, &recovered) == TW_OK) {
      WarpsetPtr guard(recovered);
      json warps = json::array();
      for (const auto& w : from_warpset(recovered)) {
        warps.push_back(matrix_to_json(w));
      }
      sol["recovered_warps"] = warps;
      if (!have_recovered) {
        report["recovered_warps"] = warps;
        have_recovered = true;
      }
    } else {
      sol["recovered_warps"] = nullptr;
    }
    report["metric_solutions"].push_back(sol);
  }
  write_json(output, report);
  return 0;
}

int cmd_hemisphere(double lambda, int radii, int angles,
                   const std::string& element_spec, const std::string& outdir,
                   double rho2_min, double rho2_max) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    fail(kExitIo, "lambda must be in (0, 1)");
  }
  if (rho2_min <= 0.0) rho2_min = lambda + 0.05;
  if (rho2_max <= 0.0) rho2_max = 0.95;
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) fail(kExitIo, "cannot create " + outdir + ": " + ec.message());

  ImagePtr element = load_element(element_spec);

  tw_warpset* raw_ws = nullptr;
  tw_status st = tw_hemisphere_warpset(lambda, radii, angles, rho2_min,
                                       rho2_max, &raw_ws);
  if (st != TW_OK) fail(kExitIo, tw_status_string(st));
  WarpsetPtr ws(raw_ws);

  tw_image *composite = nullptr, *normals_true = nullptr,
           *normals_alt = nullptr, *element_alt = nullptr;
  st = tw_paint_hemisphere(lambda, radii, angles, rho2_min, rho2_max,
                           element.get(), &composite, &normals_true,
                           &normals_alt, &element_alt);
  if (st != TW_OK) fail(kExitIo, tw_status_string(st));
  ImagePtr g1(composite), g2(normals_true), g3(normals_alt), g4(element_alt);

  const int side = 2 * 64;
  const double scale =
      2.0 * 64.0 /
      (1.6 * std::max(tw_image_width(element.get()),
                      tw_image_height(element.get())));
  const double identity[4] = {1.0, 0.0, 0.0, 1.0};
  tw_image* element_true = nullptr;
  st = tw_render_warped(element.get(), identity, side, scale, &element_true);
  if (st != TW_OK) fail(kExitIo, tw_status_string(st));
  ImagePtr g5(element_true);

  const std::filesystem::path dir(outdir);
  write_image((dir / "composite.ppm").string(), composite);
  write_image((dir / "normals_true.ppm").string(), normals_true);
  write_image((dir / "normals_alt.ppm").string(), normals_alt);
  write_image((dir / "element_true.ppm").string(), element_true);
  write_image((dir / "element_alt.ppm").string(), element_alt);

  json meta{{"lambda", lambda}, {"n_radii", radii},     {"n_angles", angles},
            {"rho2_min", rho2_min}, {"rho2_max", rho2_max}};
  write_json((dir / "warps.json").string(),
             warp_file_json(from_warpset(ws.get()), meta));
  return 0;
}

int cmd_random(int n, std::uint64_t seed, double rmin, const std::string& b,
               const std::string& output) {
  if (n < 1) fail(kExitIo, "--n must be >= 1");
  if (!(rmin > 0.0 && rmin <= 1.0)) fail(kExitIo, "--rmin must be in (0, 1]");
  Mat bm{};
  const bool have_b = !b.empty() && b != "none";
  if (have_b) bm = parse_matrix_flag(b);
  tw_warpset* raw = nullptr;
  const tw_status st =
      tw_random_warpset(seed, static_cast<size_t>(n), rmin,
                        have_b ? bm.data() : nullptr, &raw, nullptr);
  if (st != TW_OK) fail(kExitIo, tw_status_string(st));
  WarpsetPtr ws(raw);

  json meta{{"seed", seed}, {"rmin", rmin}};
  if (have_b) meta["b"] = matrix_to_json(bm);
  write_json(output, warp_file_json(from_warpset(ws.get()), meta));
  return 0;
}

int cmd_render(const std::string& element_spec, const std::string& warp,
               int size, double scale, const std::string& output) {
  ImagePtr element = load_element(element_spec);
  const Mat m = parse_matrix_flag(warp);
  tw_image* raw = nullptr;
  const tw_status st =
      tw_render_warped(element.get(), m.data(), size, scale, &raw);
  if (st == TW_ERR_SINGULAR) fail(kExitInvalid, "warp matrix is singular");
  if (st != TW_OK) fail(kExitIo, tw_status_string(st));
  ImagePtr img(raw);
  write_image(output, img.get());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Orthographic texture warps: validation, ambiguity analysis, "
      "metric-upgrade recovery and synthetic dataset generation"};
  app.require_subcommand(1);

  std::string input, output, outdir, element = "builtin-square";
  std::string b_flag = "none", warp_flag;
  double tol = 1e-9, lambda = 0.5, rmin = 0.05, scale = 1.0;
  double rho2_min = -1.0, rho2_max = -1.0;
  int n = 4, radii = 5, angles = 8, size = 128;
  std::uint64_t seed = 0;

  auto* validate_cmd =
      app.add_subcommand("validate", "Check warps and print their factors");
  validate_cmd->add_option("--input", input)->required();
  validate_cmd->add_option("--tol", tol);

  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Decide unique vs ambiguous and construct alternatives");
  analyze_cmd->add_option("--input", input)->required();
  analyze_cmd->add_option("--tol", tol);
  analyze_cmd->add_option("--seed", seed);
  analyze_cmd->add_option("--output", output);

  auto* recover_cmd = app.add_subcommand(
      "recover", "Metric upgrade: recover warps up to a rotation");
  recover_cmd->add_option("--input", input)->required();
  recover_cmd->add_option("--tol", tol);
  recover_cmd->add_option("--output", output);

  auto* hemisphere_cmd = app.add_subcommand(
      "hemisphere", "Generate the ambiguous-hemisphere example");
  hemisphere_cmd->add_option("--lambda", lambda);
  hemisphere_cmd->add_option("--radii", radii);
  hemisphere_cmd->add_option("--angles", angles);
  hemisphere_cmd->add_option("--element", element);
  hemisphere_cmd->add_option("--outdir", outdir)->required();
  hemisphere_cmd->add_option("--rho2-min", rho2_min);
  hemisphere_cmd->add_option("--rho2-max", rho2_max);

  auto* random_cmd =
      app.add_subcommand("random", "Generate a random warp-set file");
  random_cmd->add_option("--n", n);
  random_cmd->add_option("--seed", seed);
  random_cmd->add_option("--rmin", rmin);
  random_cmd->add_option("--b", b_flag);
  random_cmd->add_option("--output", output);

  auto* render_cmd =
      app.add_subcommand("render", "Render an element under a warp");
  render_cmd->add_option("--element", element)->required();
  render_cmd->add_option("--warp", warp_flag)->required();
  render_cmd->add_option("--size", size);
  render_cmd->add_option("--scale", scale);
  render_cmd->add_option("--output", output)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(input, tol);
    if (app.got_subcommand(analyze_cmd)) {
      return cmd_analyze(input, tol, seed, output);
    }
    if (app.got_subcommand(recover_cmd)) {
      return cmd_recover(input, tol, output);
    }
    if (app.got_subcommand(hemisphere_cmd)) {
      return cmd_hemisphere(lambda, radii, angles, element, outdir, rho2_min,
                            rho2_max);
    }
    if (app.got_subcommand(random_cmd)) {
      return cmd_random(n, seed, rmin, b_flag, output);
    }
    if (app.got_subcommand(render_cmd)) {
      return cmd_render(element, warp_flag, size, scale, output);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
