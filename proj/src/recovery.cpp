#include "texwarp/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace texwarp {

namespace {

double quadratic_mix(const SymMat2& m, const SymMat2& v) {
  // Bilinear part of det(M + sV): coefficient of s.
  return m.x * v.z + m.z * v.x - 2.0 * m.y * v.y;
}

}  // namespace

MetricSolution recover_metric(const GoodWarpSet& ws, const Tolerances& tol) {
  if (ws.matrices.empty()) throw Error(Errc::EmptyInput, "no matrices");
  const auto n = static_cast<Eigen::Index>(ws.matrices.size());
  Eigen::MatrixXd a(n, 4);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const SymMat2 g = gram(ws.matrices[i]);
    a(i, 0) = g.z;
    a(i, 1) = -2.0 * g.y;
    a(i, 2) = g.x;
    a(i, 3) = -1.0;
    rhs(i) = det(g);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol.eps_rank * sv(0)) ++rank;
  }

  MetricSolution out;
  out.rank = rank;
  const double consistency = 1e3 * std::max(tol.eps_cone, 1e-9);

  if (rank <= 2) {
    out.kind = MetricSolution::Kind::Underdetermined;
    return out;
  }

  svd.setThreshold(tol.eps_rank);
  const Eigen::Vector4d x0 = svd.solve(rhs);

  if (rank == 4) {
    const SymMat2 m{x0(0), x0(1), x0(2)};
    const double d = x0(3);
    if (std::abs(d - det(m)) > consistency * std::max(1.0, std::abs(d)) ||
        !is_positive_definite(m)) {
      throw Error(Errc::Inconsistent,
                  "system has full rank but the solution is not the Gram "
                  "matrix of an invertible B");
    }
    out.kind = MetricSolution::Kind::Unique;
    out.solutions.emplace_back(m, d);
    out.residual = (a * x0 - rhs).cwiseAbs().maxCoeff();
    return out;
  }

  // Rank 3: one-dimensional family x0 + s*v; impose d(s) = det(M(s)).
  const Eigen::Vector4d v = svd.matrixV().col(3);
  const SymMat2 m0{x0(0), x0(1), x0(2)};
  const SymMat2 mv{v(0), v(1), v(2)};
  const double d0 = x0(3);
  const double vd = v(3);
  const double qa = det(mv);
  const double qb = quadratic_mix(m0, mv) - vd;
  const double qc = det(m0) - d0;

  std::vector<double> roots;
  const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
  if (std::abs(qa) > 1e-14 * scale) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Citardauq form for the smaller-magnitude root to avoid cancellation
      const double q = -0.5 * (qb + std::copysign(sq, qb));
      roots.push_back(q / qa);
      if (std::abs(q) > 0.0) roots.push_back(qc / q);
    }
  } else if (std::abs(qb) > 1e-14 * scale) {
    roots.push_back(-qc / qb);
  }

  out.kind = MetricSolution::Kind::Family;
  out.nullspace_dim = 1;
  for (double s : roots) {
    const SymMat2 m{m0.x + s * mv.x, m0.y + s * mv.y, m0.z + s * mv.z};
    const double d = d0 + s * vd;
    if (!is_positive_definite(m)) continue;
    if (std::abs(d - det(m)) > consistency * std::max(1.0, std::abs(d))) {
      continue;
    }
    out.solutions.emplace_back(m, d);
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const auto& l, const auto& r) {
              if (l.second != r.second) return l.second < r.second;
              return l.first.x < r.first.x;
            });
  // Collapse double roots
  if (out.solutions.size() == 2 &&
      std::abs(out.solutions[0].second - out.solutions[1].second) <= 1e-12 &&
      frobenius_norm(SymMat2{out.solutions[0].first.x - out.solutions[1].first.x,
                             out.solutions[0].first.y - out.solutions[1].first.y,
                             out.solutions[0].first.z - out.solutions[1].first.z}) <=
          1e-12) {
    out.solutions.pop_back();
  }
  if (!out.solutions.empty()) {
    const auto& [m, d] = out.solutions.front();
    const Eigen::Vector4d x(m.x, m.y, m.z, d);
    out.residual = (a * x - rhs).cwiseAbs().maxCoeff();
  }
  return out;
}

Mat2 metric_to_b(const SymMat2& m) {
  if (!is_positive_definite(m)) {
    throw Error(Errc::NotPositiveDefinite, "metric is not positive definite");
  }
  return spd_sqrt(m);
}

UpgradeResult upgrade(const GoodWarpSet& ws, const Tolerances& tol) {
  UpgradeResult out;
  out.metric = recover_metric(ws, tol);
  if (out.metric.kind == MetricSolution::Kind::Underdetermined) {
    throw Error(Errc::RankDeficient,
                "metric system is underdetermined (rank " +
                    std::to_string(out.metric.rank) + ")");
  }
  for (const auto& [m, d] : out.metric.solutions) {
    Interpretation interp;
    interp.metric = m;
    interp.d = d;
    interp.b_hat = metric_to_b(m);
    const Mat2 b_inv = inverse(interp.b_hat);
    interp.warps_valid = true;
    for (const auto& w : ws.matrices) {
      const Mat2 t_hat = w * b_inv;
      if (!is_valid_warp(t_hat, tol)) {
        interp.warps_valid = false;
        interp.warps.clear();
        break;
      }
      interp.warps.push_back(Warp::unchecked(t_hat));
    }
    out.interpretations.push_back(std::move(interp));
  }
  const bool any_valid =
      std::any_of(out.interpretations.begin(), out.interpretations.end(),
                  [](const Interpretation& i) { return i.warps_valid; });
  if (!any_valid) {
    throw Error(Errc::ValidationFailed,
                "no metric solution yields a valid warp set");
  }
  return out;
}

Mat2 align_rotation(const std::vector<Mat2>& a, const std::vector<Mat2>& c) {
  if (a.empty() || a.size() != c.size()) {
    throw Error(Errc::InvalidArgument, "lists must be nonempty, equal size");
  }
  double s11 = 0.0, s12 = 0.0, s21 = 0.0, s22 = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Mat2 s = transpose(a[i]) * c[i];
    s11 += s.a11;
    s12 += s.a12;
    s21 += s.a21;
    s22 += s.a22;
    scale += frobenius_norm(a[i]) * frobenius_norm(c[i]);
  }
  const double cos_part = s11 + s22;
  const double sin_part = s21 - s12;
  if (std::hypot(cos_part, sin_part) <= 1e-12 * std::max(1.0, scale)) {
    throw Error(Errc::DegenerateInput, "optimal rotation is not unique");
  }
  return rotation(std::atan2(sin_part, cos_part));
}

std::pair<Vec2, Vec2> transported_periods(const Mat2& b,
                                          const TextureSpec& t) {
  const double d = det(b);
  const double n = frobenius_norm(b);
  if (std::abs(d) <= 1e-14 * std::max(1.0, n * n)) {
    throw Error(Errc::Singular, "B is numerically singular");
  }
  const Mat2 b_inv = inverse(b);
  return {b_inv * t.tau, b_inv * t.sigma};
}

}  // namespace texwarp
