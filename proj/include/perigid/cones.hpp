#pragma once

// Cone structure of a vertex star: the bars leaving one vertex representative,
// read as vectors v_1, ..., v_k from a common origin.
//
// C(v) = { sum a_i v_i : a_i >= 0 }. Its lineality space is spanned by the
// v_i with -v_i in C(v). The star is pointed in codimension two when that
// space has dimension at most d - 2.

#include <perigid/error.hpp>
#include <perigid/exact.hpp>
#include <perigid/feasibility.hpp>
#include <perigid/framework.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace perigid {

struct VectorStar {
  std::string vertex_orbit;
  std::vector<Vec> vectors;
};

// One vector per incidence: +e for edges leaving the orbit, -e for edges
// entering it; a same-orbit edge contributes both.
inline VectorStar vertex_star(const PeriodicFramework& fw, const std::string& orbit) {
  const std::size_t i = fw.orbit_index(orbit);
  VectorStar star{orbit, {}};
  for (std::size_t k = 0; k < fw.num_edges(); ++k) {
    const Vec e = edge_vector(fw, k);
    if (fw.tail_index(k) == i) star.vectors.push_back(e);
    if (fw.head_index(k) == i) star.vectors.push_back(-e);
  }
  return star;
}

// System builders, generic over the scalar so exact and floating runs share
// one formulation.

// sum a_i v_i = 0 with every a_i >= 1.
template <class T>
LinearSystem<T> dependence_system(const std::vector<std::vector<T>>& vectors) {
  LinearSystem<T> sys;
  sys.num_vars = vectors.size();
  sys.lower.assign(vectors.size(), T(1));
  const std::size_t d = vectors.empty() ? 0 : vectors.front().size();
  for (std::size_t r = 0; r < d; ++r) {
    std::vector<T> row(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) row[i] = vectors[i][r];
    sys.add_row(std::move(row), T(0));
  }
  return sys;
}

// sum a_j v_j = target with a >= 0.
template <class T>
LinearSystem<T> membership_system(const std::vector<std::vector<T>>& vectors, const std::vector<T>& target) {
  LinearSystem<T> sys;
  sys.num_vars = vectors.size();
  sys.lower.assign(vectors.size(), T(0));
  for (std::size_t r = 0; r < target.size(); ++r) {
    std::vector<T> row(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) row[i] = vectors[i][r];
    sys.add_row(std::move(row), target[r]);
  }
  return sys;
}

// Local expansion probe for a star centered at a fixed origin. Unknowns are
// velocities u_i (free, d each) then slacks s_ij >= 0 for i < j:
//   <v_i, u_i> = 0,
//   <v_i - v_j, u_i - u_j> - s_ij = 0,
//   sum s_ij = 1.
// Feasible iff some bar-preserving velocity assignment is weakly expansive
// on every pair and strictly on at least one.
template <class T>
LinearSystem<T> expansion_probe_system(const std::vector<std::vector<T>>& vectors) {
  const std::size_t k = vectors.size();
  const std::size_t d = k == 0 ? 0 : vectors.front().size();
  const std::size_t pairs = k * (k - (k > 0 ? 1 : 0)) / 2;
  LinearSystem<T> sys;
  sys.num_vars = k * d + pairs;
  sys.lower.assign(k * d, std::nullopt);
  sys.lower.resize(sys.num_vars, T(0));

  for (std::size_t i = 0; i < k; ++i) {
    std::vector<T> row(sys.num_vars, T(0));
    for (std::size_t r = 0; r < d; ++r) row[i * d + r] = vectors[i][r];
    sys.add_row(std::move(row), T(0));
  }
  std::size_t slack = k * d;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j, ++slack) {
      std::vector<T> row(sys.num_vars, T(0));
      for (std::size_t r = 0; r < d; ++r) {
        const T diff = vectors[i][r] - vectors[j][r];
        row[i * d + r] = diff;
        row[j * d + r] = T(-diff);
      }
      row[slack] = T(-1);
      sys.add_row(std::move(row), T(0));
    }
  }
  if (pairs > 0) {
    std::vector<T> row(sys.num_vars, T(0));
    for (std::size_t s = k * d; s < sys.num_vars; ++s) row[s] = T(1);
    sys.add_row(std::move(row), T(1));
  }
  return sys;
}

namespace detail {

inline std::vector<std::vector<double>> as_rows(const std::vector<Vec>& vectors) {
  std::vector<std::vector<double>> out;
  out.reserve(vectors.size());
  for (const Vec& v : vectors) out.emplace_back(v.data(), v.data() + v.size());
  return out;
}

inline std::vector<std::vector<Rational>> as_rational_rows(const std::vector<Vec>& vectors) {
  std::vector<std::vector<Rational>> out;
  out.reserve(vectors.size());
  for (const Vec& v : vectors) out.push_back(to_rational(v));
  return out;
}

inline void require_nonempty(const VectorStar& star) {
  if (star.vectors.empty()) throw Error(ErrorCode::DimensionMismatch, "empty vector star");
}

// Orthonormal basis (columns) of span(vectors), rank decided at tol relative
// to the largest singular value.
inline Mat span_basis(const std::vector<Vec>& vectors, Eigen::Index d, double tol) {
  if (vectors.empty()) return Mat(d, 0);
  Mat m(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  const Vec& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > tol * sigma[0] && sigma[rank] > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

inline Mat orthogonal_complement(const Mat& basis, Eigen::Index d) {
  if (basis.cols() == 0) return Mat::Identity(d, d);
  Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(d - basis.cols());
}

}  // namespace detail

// Coefficients a_i >= 1 with sum a_i v_i = 0, if the whole star is
// positively dependent.
inline std::optional<Vec> positive_dependence(const VectorStar& star, double tol = kDefaultFeasibilityTolerance) {
  detail::require_nonempty(star);
  auto a = solve_linear_feasibility(dependence_system(detail::as_rows(star.vectors)), tol);
  if (!a) return std::nullopt;
  return Eigen::Map<const Vec>(a->data(), static_cast<Eigen::Index>(a->size()));
}

// Same verdict computed in exact rational arithmetic on the stored doubles.
inline std::optional<std::vector<Rational>> positive_dependence_exact(const VectorStar& star) {
  detail::require_nonempty(star);
  return solve_linear_feasibility(dependence_system(detail::as_rational_rows(star.vectors)), Rational(0));
}

// Indices i with -v_i in C(v), by one membership test per vector.
inline std::vector<std::size_t> lineal_indices(const VectorStar& star, double tol = kDefaultFeasibilityTolerance) {
  detail::require_nonempty(star);
  const auto rows = detail::as_rows(star.vectors);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> target(rows[i].size());
    for (std::size_t r = 0; r < target.size(); ++r) target[r] = -rows[i][r];
    if (solve_linear_feasibility(membership_system(rows, target), tol)) out.push_back(i);
  }
  return out;
}

// Orthonormal basis (columns) of the largest linear subspace in C(v).
inline Mat lineality_space(const VectorStar& star, double tol = kDefaultFeasibilityTolerance) {
  const auto idx = lineal_indices(star, tol);
  std::vector<Vec> lineal;
  for (std::size_t i : idx) lineal.push_back(star.vectors[i]);
  return detail::span_basis(lineal, star.vectors.front().size(), tol);
}

struct ConeAnalysis {
  std::string orbit;
  Mat lineality_basis;  // d x L, orthonormal columns
  std::vector<std::size_t> lineal_indices;
  bool pointed_codim2 = false;
  std::optional<Vec> separating_normal;  // unit vector
  std::optional<Vec> positive_dependence;

  Eigen::Index lineality_dim() const { return lineality_basis.cols(); }
};

inline ConeAnalysis analyze_star(const VectorStar& star, int d, double tol = kDefaultFeasibilityTolerance) {
  detail::require_nonempty(star);
  for (const Vec& v : star.vectors)
    if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "star vector length differs from dimension");

  ConeAnalysis out;
  out.orbit = star.vertex_orbit;
  out.lineal_indices = lineal_indices(star, tol);
  std::vector<Vec> lineal, rest;
  for (std::size_t i = 0; i < star.vectors.size(); ++i) {
    const bool is_lineal = std::find(out.lineal_indices.begin(), out.lineal_indices.end(), i) != out.lineal_indices.end();
    (is_lineal ? lineal : rest).push_back(star.vectors[i]);
  }
  out.lineality_basis = detail::span_basis(lineal, d, tol);
  out.pointed_codim2 = out.lineality_dim() <= d - 2;
  out.positive_dependence = positive_dependence(star, tol);

  if (out.lineality_dim() < d) {
    // h = complement * beta with <h, u> >= 1 for every non-lineal u.
    const Mat complement = detail::orthogonal_complement(out.lineality_basis, d);
    const auto free_dims = static_cast<std::size_t>(complement.cols());
    if (rest.empty()) {
      out.separating_normal = complement.col(0);
    } else {
      LinearSystem<double> sys;
      sys.num_vars = free_dims + rest.size();
      sys.lower.assign(free_dims, std::nullopt);
      sys.lower.resize(sys.num_vars, 0.0);
      for (std::size_t i = 0; i < rest.size(); ++i) {
        std::vector<double> row(sys.num_vars, 0.0);
        const Vec proj = complement.transpose() * rest[i];
        for (std::size_t c = 0; c < free_dims; ++c) row[c] = proj[static_cast<Eigen::Index>(c)];
        row[free_dims + i] = -1.0;
        sys.add_row(std::move(row), 1.0);
      }
      const auto sol = solve_linear_feasibility(sys, tol);
      if (!sol) throw Error(ErrorCode::NumericalFailure, "no separating hyperplane for the non-lineal vectors");
      const Vec beta = Eigen::Map<const Vec>(sol->data(), static_cast<Eigen::Index>(free_dims));
      const Vec h = complement * beta;
      out.separating_normal = h.normalized();
    }
  }
  return out;
}

// Expansion at a vertex is impossible when its whole star is positively
// dependent: then no bar-preserving velocities can expand every pair with
// one strict increase.
inline bool refute_expansive_at_vertex(const VectorStar& star, double tol = kDefaultFeasibilityTolerance) {
  return positive_dependence(star, tol).has_value();
}

// Velocities (d per star vector, concatenated) realizing a local effective
// expansion with the center held fixed, if one exists.
inline std::optional<Vec> find_expansive_velocities(const VectorStar& star,
                                                    double tol = kDefaultFeasibilityTolerance) {
  detail::require_nonempty(star);
  if (star.vectors.size() < 2) return std::nullopt;
  const auto sol = solve_linear_feasibility(expansion_probe_system(detail::as_rows(star.vectors)), tol);
  if (!sol) return std::nullopt;
  const auto d = static_cast<Eigen::Index>(star.vectors.front().size());
  return Eigen::Map<const Vec>(sol->data(), d * static_cast<Eigen::Index>(star.vectors.size()));
}

}  // namespace perigid
