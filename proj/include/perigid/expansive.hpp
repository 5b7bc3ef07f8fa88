#pragma once

// Infinitesimal expansive cone of a periodic framework.
//
// Every pair of joints (a, b + w) gives the inequality
//   <s, u_b + dL * w - u_a> >= 0,   s = p_b + L w - p_a,
// on a motion u. The universal pair set is infinite; it is truncated to
// shifts with |w|_inf <= R and checked for stability at R + 1. Inequalities
// are written in coordinates of the nontrivial flex basis, where bars and
// isometries are already quotiented out.

#include <perigid/cones.hpp>
#include <perigid/double_description.hpp>
#include <perigid/error.hpp>
#include <perigid/framework.hpp>
#include <perigid/rigidity.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace perigid {

inline constexpr int kDefaultRadius = 2;
inline constexpr double kDefaultExpansionTolerance = 1e-9;

struct PairConstraint {
  std::size_t a = 0;
  std::size_t b = 0;
  std::string orbit_a;
  std::string orbit_b;
  Shift shift;
  Vec separation;
  Vec row;

  double evaluate(const Vec& motion) const { return row.dot(motion); }
};

namespace detail {

// Calls fn(w) for every integer vector in [-radius, radius]^d, last
// coordinate fastest.
template <class Fn>
void for_each_shift(int d, int radius, Fn&& fn) {
  Shift w(static_cast<std::size_t>(d), -radius);
  while (true) {
    fn(static_cast<const Shift&>(w));
    int c = d - 1;
    while (c >= 0 && w[static_cast<std::size_t>(c)] == radius) {
      w[static_cast<std::size_t>(c)] = -radius;
      --c;
    }
    if (c < 0) return;
    ++w[static_cast<std::size_t>(c)];
  }
}

}  // namespace detail

// All joint pairs with |w|_inf <= radius, one per antipodal class, in
// canonical orientation. Count: C(n,2) (2R+1)^d + n ((2R+1)^d - 1) / 2.
inline std::vector<PairConstraint> enumerate_pairs(const PeriodicFramework& fw, int radius) {
  if (radius < 1) throw Error(ErrorCode::InvalidDimension, "radius must be at least 1");
  std::vector<PairConstraint> out;
  const std::size_t n = fw.num_orbits();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      // Orient distinct orbits by id order.
      const bool swap = i != j && !(fw.orbit_id(i) < fw.orbit_id(j));
      const std::size_t a = swap ? j : i, b = swap ? i : j;
      detail::for_each_shift(fw.dimension(), radius, [&](const Shift& w) {
        if (a == b && leading_sign(w) <= 0) return;
        PairConstraint pc;
        pc.a = a;
        pc.b = b;
        pc.orbit_a = fw.orbit_id(a);
        pc.orbit_b = fw.orbit_id(b);
        pc.shift = w;
        pc.separation = fw.position(b) + lattice_vector(fw.lattice(), w) - fw.position(a);
        pc.row = constraint_row(fw, a, b, w);
        out.push_back(std::move(pc));
      });
    }
  }
  return out;
}

struct ExpansiveCone {
  Mat flex_basis;        // (dn + d^2) x f
  Mat halfspace_matrix;  // unit rows in flex coordinates
  int radius = kDefaultRadius;
  std::vector<Vec> rays;  // unit vectors in flex coordinates
  bool is_trivial = true;

  Eigen::Index flex_dim() const { return flex_basis.cols(); }
  Vec ray_motion(std::size_t i) const { return flex_basis * rays.at(i); }
};

// Pair rows composed with the flex basis; vanishing rows dropped and
// parallel duplicates merged.
inline Mat projected_halfspaces(const PeriodicFramework& fw, const Mat& flex_basis, int radius,
                                double tol = kDefaultExpansionTolerance) {
  std::vector<Vec> kept;
  for (const PairConstraint& pc : enumerate_pairs(fw, radius)) {
    const Vec h = flex_basis.transpose() * pc.row;
    const double scale = pc.row.norm();
    if (!(h.norm() > tol * scale)) continue;
    const Vec unit = h.normalized();
    bool dup = false;
    for (const Vec& k : kept)
      if ((k - unit).norm() < 1e-8) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(unit);
  }
  Mat out(static_cast<Eigen::Index>(kept.size()), flex_basis.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = kept[i].transpose();
  return out;
}

inline ExpansiveCone expansive_cone(const PeriodicFramework& fw, const RigidityReport& report,
                                    int radius = kDefaultRadius, double tol = kDefaultExpansionTolerance) {
  ExpansiveCone cone;
  cone.flex_basis = report.flex_basis;
  cone.radius = radius;
  const Eigen::Index f = report.flex_basis.cols();
  if (f == 0) {
    cone.halfspace_matrix.resize(0, 0);
    return cone;
  }
  if (f > kMaxConeDimension)
    throw Error(ErrorCode::FlexDimensionTooLarge, "flex dimension " + std::to_string(f) + " exceeds 6");
  cone.halfspace_matrix = projected_halfspaces(fw, report.flex_basis, radius, tol);
  cone.rays = extremal_rays(cone.halfspace_matrix, f);
  cone.is_trivial = cone.rays.empty();
  return cone;
}

// One-degree-of-freedom mechanism realizing extremal ray i: pairs held at
// equality by the ray are inserted as edge orbits, greedily and only while
// they raise the rank, until one nontrivial flex remains.
inline PeriodicFramework ray_mechanism(const PeriodicFramework& fw, const ExpansiveCone& cone, std::size_t i,
                                       double tol = kDefaultExpansionTolerance) {
  const Vec motion = cone.ray_motion(i);
  PeriodicFramework out = fw;
  Eigen::Index dof = cone.flex_dim();
  for (const PairConstraint& pc : enumerate_pairs(fw, cone.radius)) {
    if (dof <= 1) break;
    const double scale = pc.row.norm();
    if (!((cone.flex_basis.transpose() * pc.row).norm() > tol * scale)) continue;
    if (std::abs(pc.evaluate(motion)) > tol * scale * motion.norm()) continue;
    QuotientGraph graph = out.graph();
    graph.edge_orbits.push_back({pc.orbit_a, pc.orbit_b, pc.shift});
    PeriodicFramework candidate = validate_framework(std::move(graph), out.placement());
    const RigidityReport rep = analyze(candidate);
    if (rep.dof < dof) {
      out = std::move(candidate);
      dof = rep.dof;
    }
  }
  return out;
}

// Rays of both lists pair up one-to-one with angle below angle_tol.
inline bool same_rays(const std::vector<Vec>& lhs, const std::vector<Vec>& rhs, double angle_tol = 1e-6) {
  if (lhs.size() != rhs.size()) return false;
  std::vector<bool> used(rhs.size(), false);
  for (const Vec& x : lhs) {
    bool found = false;
    for (std::size_t j = 0; j < rhs.size() && !found; ++j) {
      if (used[j]) continue;
      const double c = std::clamp(x.normalized().dot(rhs[j].normalized()), -1.0, 1.0);
      if (std::acos(c) < angle_tol) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

// Smallest r <= radius whose ray set equals that at radius, provided the set
// at radius + 1 also agrees; nullopt when the re-check at radius + 1 fails.
inline std::optional<int> stable_radius(const PeriodicFramework& fw, const RigidityReport& report,
                                        int radius = kDefaultRadius, double tol = kDefaultExpansionTolerance) {
  const auto at = expansive_cone(fw, report, radius, tol);
  const auto next = expansive_cone(fw, report, radius + 1, tol);
  if (!same_rays(at.rays, next.rays)) return std::nullopt;
  int smallest = radius;
  for (int r = radius - 1; r >= 1; --r) {
    if (!same_rays(expansive_cone(fw, report, r, tol).rays, at.rays)) break;
    smallest = r;
  }
  return smallest;
}

enum class Expansiveness { NotExpansive, WeaklyExpansive, EffectivelyExpansive };

inline std::string_view to_string(Expansiveness e) {
  switch (e) {
    case Expansiveness::NotExpansive: return "NotExpansive";
    case Expansiveness::WeaklyExpansive: return "WeaklyExpansive";
    case Expansiveness::EffectivelyExpansive: return "EffectivelyExpansive";
  }
  return "Unknown";
}

// Throws NotAFlex if some bar constraint is violated beyond tol (relative to
// the row and motion norms).
inline void require_flex(const PeriodicFramework& fw, const Vec& motion, double tol = kDefaultExpansionTolerance) {
  if (motion.size() != static_cast<Eigen::Index>(fw.num_unknowns()))
    throw Error(ErrorCode::DimensionMismatch, "motion vector length");
  const RigidityMatrix rm = rigidity_matrix(fw);
  const double mnorm = motion.norm();
  for (Eigen::Index k = 0; k < rm.num_rows(); ++k) {
    const double residual = std::abs(rm.rows.row(k).dot(motion));
    if (residual > tol * rm.rows.row(k).norm() * mnorm)
      throw Error(ErrorCode::NotAFlex, "edge orbit " + std::to_string(k) + " residual " + std::to_string(residual));
  }
}

// Pair value scaled by |row| |motion|; 0 for the zero motion.
inline double relative_value(const PairConstraint& pc, const Vec& motion) {
  const double denom = pc.row.norm() * motion.norm();
  return denom > 0.0 ? pc.evaluate(motion) / denom : 0.0;
}

inline Expansiveness classify_flex(const PeriodicFramework& fw, const Vec& flex, int radius = kDefaultRadius,
                                   double tol = kDefaultExpansionTolerance) {
  require_flex(fw, flex, tol);
  bool strict = false;
  for (const PairConstraint& pc : enumerate_pairs(fw, radius)) {
    const double v = relative_value(pc, flex);
    if (v < -tol) return Expansiveness::NotExpansive;
    if (v > tol) strict = true;
  }
  return strict ? Expansiveness::EffectivelyExpansive : Expansiveness::WeaklyExpansive;
}

// Orbit ids (in orbit order) touched by some strictly expanding pair.
inline std::vector<std::string> effective_vertices(const PeriodicFramework& fw, const Vec& flex,
                                                   int radius = kDefaultRadius,
                                                   double tol = kDefaultExpansionTolerance) {
  require_flex(fw, flex, tol);
  std::vector<bool> effective(fw.num_orbits(), false);
  for (const PairConstraint& pc : enumerate_pairs(fw, radius)) {
    if (relative_value(pc, flex) > tol) effective[pc.a] = effective[pc.b] = true;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < fw.num_orbits(); ++i)
    if (effective[i]) out.push_back(fw.orbit_id(i));
  return out;
}

struct PointednessCheck {
  std::vector<ConeAnalysis> vertices;  // one per effective vertex
  bool passed = false;
};

// Runs the star analysis at every vertex where the flex is effective; passes
// iff each of those stars is pointed in codimension two.
inline PointednessCheck verify_pointedness_theorem(const PeriodicFramework& fw, const Vec& flex,
                                                   int radius = kDefaultRadius,
                                                   double tol = kDefaultExpansionTolerance) {
  if (classify_flex(fw, flex, radius, tol) != Expansiveness::EffectivelyExpansive)
    throw Error(ErrorCode::NotExpansive, "flex is not effectively expansive");
  PointednessCheck out;
  out.passed = true;
  for (const std::string& orbit : effective_vertices(fw, flex, radius, tol)) {
    out.vertices.push_back(analyze_star(vertex_star(fw, orbit), fw.dimension()));
    out.passed = out.passed && out.vertices.back().pointed_codim2;
  }
  return out;
}

// Pair audit rows: orbit_a, orbit_b, shift..., value of the row at motion.
inline void write_pair_csv(std::ostream& os, const PeriodicFramework& fw, int radius, const Vec& motion) {
  os << "orbit_a,orbit_b";
  for (int c = 1; c <= fw.dimension(); ++c) os << ",shift_" << c;
  os << ",value\n";
  char buf[32];
  for (const PairConstraint& pc : enumerate_pairs(fw, radius)) {
    os << pc.orbit_a << ',' << pc.orbit_b;
    for (int x : pc.shift) os << ',' << x;
    std::snprintf(buf, sizeof buf, "%.12g", pc.evaluate(motion));
    os << ',' << buf << '\n';
  }
}

}  // namespace perigid
