#pragma once

// Double description method: extremal rays of a pointed cone {c : A c >= 0}.
//
// Rows are inserted one at a time. Rays strictly inside the new halfspace and
// rays on its boundary survive; each adjacent (inside, outside) ray pair
// contributes its boundary crossing. Adjacency uses the combinatorial test on
// sets of tight rows.

#include <perigid/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace perigid {

inline constexpr Eigen::Index kMaxConeDimension = 6;

namespace detail {

struct DdRay {
  Eigen::VectorXd dir;
  std::vector<bool> tight;  // indexed by row; only processed rows are meaningful
};

inline bool is_subset(const std::vector<std::size_t>& small, const std::vector<bool>& big) {
  return std::all_of(small.begin(), small.end(), [&](std::size_t i) { return big[i]; });
}

// Lexicographic order on rounded coordinates, for reproducible ray lists.
inline bool ray_before(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = std::round(a[i] * 1e9), y = std::round(b[i] * 1e9);
    if (x != y) return x > y;
  }
  return false;
}

}  // namespace detail

// Extremal rays (unit columns of the result) of {c in R^f : halfspaces * c >= 0}.
// Throws NonPointedCone when the cone contains a line.
inline std::vector<Eigen::VectorXd> extremal_rays(const Eigen::MatrixXd& halfspaces, Eigen::Index f,
                                                  double tol = 1e-9) {
  using Eigen::VectorXd;
  if (f == 0) return {};
  if (f > kMaxConeDimension)
    throw Error(ErrorCode::FlexDimensionTooLarge, "cone dimension " + std::to_string(f) + " exceeds 6");
  if (halfspaces.cols() != f) throw Error(ErrorCode::DimensionMismatch, "halfspace width differs from f");

  const auto k = static_cast<std::size_t>(halfspaces.rows());
  Eigen::MatrixXd rows = halfspaces;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double nrm = rows.row(i).norm();
    if (nrm > 0.0) rows.row(i) /= nrm;
  }

  // Greedy choice of f independent rows for the initial simplicial cone.
  std::vector<std::size_t> basis_rows;
  {
    Eigen::MatrixXd q(f, 0);
    for (std::size_t i = 0; i < k && static_cast<Eigen::Index>(basis_rows.size()) < f; ++i) {
      VectorXd r = rows.row(static_cast<Eigen::Index>(i)).transpose();
      if (q.cols() > 0) r -= q * (q.transpose() * r);
      if (q.cols() > 0) r -= q * (q.transpose() * r);
      if (r.norm() > 1e-7) {
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = r.normalized();
        basis_rows.push_back(i);
      }
    }
  }
  if (static_cast<Eigen::Index>(basis_rows.size()) < f)
    throw Error(ErrorCode::NonPointedCone, "halfspaces have rank " + std::to_string(basis_rows.size()) +
                                               " < " + std::to_string(f) + "; the cone contains a line");

  Eigen::MatrixXd b(f, f);
  for (Eigen::Index i = 0; i < f; ++i) b.row(i) = rows.row(static_cast<Eigen::Index>(basis_rows[static_cast<std::size_t>(i)]));
  const Eigen::MatrixXd inv = b.fullPivLu().inverse();

  std::vector<detail::DdRay> rays;
  for (Eigen::Index j = 0; j < f; ++j) {
    detail::DdRay ray{inv.col(j).normalized(), std::vector<bool>(k, false)};
    for (Eigen::Index i = 0; i < f; ++i)
      if (i != j) ray.tight[basis_rows[static_cast<std::size_t>(i)]] = true;
    rays.push_back(std::move(ray));
  }

  std::vector<bool> processed(k, false);
  for (std::size_t i : basis_rows) processed[i] = true;

  for (std::size_t row = 0; row < k; ++row) {
    if (processed[row]) continue;
    const VectorXd a = rows.row(static_cast<Eigen::Index>(row)).transpose();

    std::vector<std::size_t> pos, neg;
    std::vector<detail::DdRay> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      const double v = a.dot(rays[r].dir);
      if (v > tol) {
        pos.push_back(r);
        next.push_back(rays[r]);
      } else if (v < -tol) {
        neg.push_back(r);
      } else {
        next.push_back(rays[r]);
        next.back().tight[row] = true;
      }
    }

    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        std::vector<std::size_t> common;
        for (std::size_t i = 0; i < k; ++i)
          if (processed[i] && rays[p].tight[i] && rays[n].tight[i]) common.push_back(i);
        if (static_cast<Eigen::Index>(common.size()) < f - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != n && detail::is_subset(common, rays[r].tight)) adjacent = false;
        if (!adjacent) continue;

        const double vp = a.dot(rays[p].dir), vn = a.dot(rays[n].dir);
        VectorXd dir = vp * rays[n].dir - vn * rays[p].dir;
        const double nrm = dir.norm();
        if (!(nrm > 0.0)) throw Error(ErrorCode::NumericalFailure, "degenerate ray combination");
        detail::DdRay ray{dir / nrm, std::vector<bool>(k, false)};
        for (std::size_t i : common) ray.tight[i] = true;
        ray.tight[row] = true;
        next.push_back(std::move(ray));
      }
    }
    processed[row] = true;
    rays = std::move(next);
  }

  std::vector<VectorXd> out;
  for (const auto& ray : rays) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const VectorXd& o) { return (o - ray.dir).norm() < 1e-8; });
    if (!dup) out.push_back(ray.dir);
  }
  std::sort(out.begin(), out.end(), detail::ray_before);
  return out;
}

}  // namespace perigid
