#pragma once

// Periodic rigidity matrix and the infinitesimal data derived from it.
//
// Rows are edge-orbit constraints (m rows), columns follow the motion layout
// of pack_state(): d velocity entries per vertex orbit, then the lattice
// velocity column-major. The factor 2 from differentiating squared lengths is
// dropped throughout.

#include <perigid/error.hpp>
#include <perigid/framework.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <vector>

namespace perigid {

inline constexpr double kDefaultRankTolerance = 1e-9;

inline std::size_t binomial2(std::size_t d) { return d * (d - 1) / 2; }

// Number of trivial (isometric) motions: d translations plus C(d,2) rotations.
inline std::size_t isometry_dimension(int d) {
  return static_cast<std::size_t>(d) + binomial2(static_cast<std::size_t>(d));
}

// Gradient of (1/2)|p_b + lattice*w - p_a|^2 in the motion layout.
// Vertex blocks cancel when a == b.
inline Vec constraint_row(const PeriodicFramework& fw, std::size_t a, std::size_t b, const Shift& w) {
  const Eigen::Index d = fw.dimension();
  const Vec s = fw.position(b) + lattice_vector(fw.lattice(), w) - fw.position(a);
  Vec row = Vec::Zero(static_cast<Eigen::Index>(fw.num_unknowns()));
  row.segment(static_cast<Eigen::Index>(a) * d, d) -= s;
  row.segment(static_cast<Eigen::Index>(b) * d, d) += s;
  const Eigen::Index base = d * static_cast<Eigen::Index>(fw.num_orbits());
  for (Eigen::Index c = 0; c < d; ++c) {
    if (w[static_cast<std::size_t>(c)] == 0) continue;
    row.segment(base + c * d, d) += static_cast<double>(w[static_cast<std::size_t>(c)]) * s;
  }
  return row;
}

struct RigidityMatrix {
  Mat rows;  // m x (dn + d^2)

  Eigen::Index num_rows() const { return rows.rows(); }
  Eigen::Index num_cols() const { return rows.cols(); }
};

inline RigidityMatrix rigidity_matrix(const PeriodicFramework& fw) {
  RigidityMatrix out;
  out.rows.resize(static_cast<Eigen::Index>(fw.num_edges()), static_cast<Eigen::Index>(fw.num_unknowns()));
  for (std::size_t k = 0; k < fw.num_edges(); ++k)
    out.rows.row(static_cast<Eigen::Index>(k)) =
        constraint_row(fw, fw.tail_index(k), fw.head_index(k), fw.edge(k).shift).transpose();
  return out;
}

// Columns: d translations, then rotations S_ab = e_a e_b^T - e_b e_a^T for a < b
// acting by p_i -> S p_i and lattice -> S lattice.
inline Mat trivial_motion_basis(const PeriodicFramework& fw) {
  const Eigen::Index d = fw.dimension();
  const auto n = static_cast<Eigen::Index>(fw.num_orbits());
  const auto cols = static_cast<Eigen::Index>(isometry_dimension(fw.dimension()));
  Mat basis = Mat::Zero(static_cast<Eigen::Index>(fw.num_unknowns()), cols);

  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < d; ++a, ++col)
    for (Eigen::Index i = 0; i < n; ++i) basis(i * d + a, col) = 1.0;

  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b, ++col) {
      Mat skew = Mat::Zero(d, d);
      skew(a, b) = 1.0;
      skew(b, a) = -1.0;
      for (Eigen::Index i = 0; i < n; ++i)
        basis.col(col).segment(i * d, d) = skew * fw.position(static_cast<std::size_t>(i));
      basis.col(col).tail(d * d) = (skew * fw.lattice()).reshaped();
    }
  }
  return basis;
}

struct RigidityReport {
  Eigen::Index rank = 0;
  Mat trivial_basis;  // columns, (dn + d^2) x (d + C(d,2))
  Mat flex_basis;     // orthonormal columns, (dn + d^2) x f
  Mat stress_basis;   // orthonormal columns, m x s
  Eigen::Index dof = 0;
  double tolerance_used = kDefaultRankTolerance;
  Vec singular_values;

  Eigen::Index stress_dim() const { return stress_basis.cols(); }
};

namespace detail {

// Numerical rank of a matrix whose singular values are sigma (descending),
// threshold tol * sigma_max. Throws IllConditioned when the spectrum has no
// clear gap around the threshold.
inline Eigen::Index revealed_rank(const Vec& sigma, double tol) {
  if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
  const double threshold = tol * sigma[0];
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > threshold) ++rank;
  const bool kept_too_close = rank > 0 && sigma[rank - 1] < 10.0 * threshold;
  const bool dropped_too_close = rank < sigma.size() && sigma[rank] > threshold / 10.0;
  if (kept_too_close || dropped_too_close)
    throw Error(ErrorCode::IllConditioned, "no singular-value gap at relative threshold " + std::to_string(tol));
  return rank;
}

}  // namespace detail

inline RigidityReport analyze(const PeriodicFramework& fw, double tol = kDefaultRankTolerance) {
  const RigidityMatrix rm = rigidity_matrix(fw);
  const Eigen::Index m = rm.num_rows();
  const Eigen::Index cols = rm.num_cols();

  RigidityReport report;
  report.tolerance_used = tol;
  report.trivial_basis = trivial_motion_basis(fw);

  Mat null_basis;
  if (m == 0) {
    report.rank = 0;
    null_basis = Mat::Identity(cols, cols);
    report.stress_basis.resize(0, 0);
  } else {
    Eigen::JacobiSVD<Mat> svd(rm.rows, Eigen::ComputeFullU | Eigen::ComputeFullV);
    report.singular_values = svd.singularValues();
    report.rank = detail::revealed_rank(report.singular_values, tol);
    null_basis = svd.matrixV().rightCols(cols - report.rank);
    report.stress_basis = svd.matrixU().rightCols(m - report.rank);
  }

  const Eigen::Index trivial_dim = report.trivial_basis.cols();
  const Eigen::Index flex_dim = null_basis.cols() - trivial_dim;
  if (flex_dim < 0) throw Error(ErrorCode::NumericalFailure, "nullspace smaller than the isometry dimension");

  // Quotient the isometries by orthogonal complement.
  Eigen::HouseholderQR<Mat> qr(report.trivial_basis);
  const Mat q = qr.householderQ() * Mat::Identity(cols, trivial_dim);
  const Mat residual = null_basis - q * (q.transpose() * null_basis);
  if (flex_dim > 0) {
    Eigen::JacobiSVD<Mat> svd(residual, Eigen::ComputeThinU);
    report.flex_basis = svd.matrixU().leftCols(flex_dim);
  } else {
    report.flex_basis.resize(cols, 0);
  }
  report.dof = flex_dim;
  return report;
}

// The unique stress, scaled so that its entry at normalize_edge equals target.
inline Vec stress_coefficients(const PeriodicFramework& fw, const RigidityReport& report, std::size_t normalize_edge,
                               double target = 1.0) {
  if (normalize_edge >= fw.num_edges())
    throw Error(ErrorCode::IndexOutOfRange, "edge orbit index " + std::to_string(normalize_edge));
  if (report.stress_dim() == 0) throw Error(ErrorCode::NoStress, "framework has independent edge constraints");
  if (report.stress_dim() > 1)
    throw Error(ErrorCode::NonUniqueStress, std::to_string(report.stress_dim()) + "-dimensional stress space");
  const Vec omega = report.stress_basis.col(0);
  const double pivot = omega[static_cast<Eigen::Index>(normalize_edge)];
  if (std::abs(pivot) < report.tolerance_used * omega.cwiseAbs().maxCoeff())
    throw Error(ErrorCode::ZeroPivot, "stress vanishes on edge orbit " + std::to_string(normalize_edge));
  return omega * (target / pivot);
}

inline bool is_minimally_rigid(const PeriodicFramework& fw, double tol = kDefaultRankTolerance) {
  const RigidityReport report = analyze(fw, tol);
  const auto m = static_cast<Eigen::Index>(fw.num_edges());
  const auto d = static_cast<std::size_t>(fw.dimension());
  const auto bound = static_cast<Eigen::Index>(d * fw.num_orbits() + binomial2(d));
  return report.rank == m && m == bound;
}

}  // namespace perigid
