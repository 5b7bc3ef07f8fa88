#pragma once

// Builders for the two framework families studied here, plus edge-orbit
// insertion and removal.
//
// Simplex family in dimension d: a "red" orbit at the origin and a "green"
// orbit at the barycenter v = (l_1 + ... + l_d) / (d + 1) of the simplex
// 0, l_1, ..., l_d. Green connects to l_i and l_i + l_j (i < j); the
// enhanced variant also connects v to 2 l_i.

#include <perigid/error.hpp>
#include <perigid/framework.hpp>

#include <Eigen/Cholesky>

#include <string>
#include <utility>
#include <vector>

namespace perigid {

inline const std::string kRed = "red";
inline const std::string kGreen = "green";

struct SimplexVariant {
  enum class Kind { Base, Enhanced, Removed };
  Kind kind = Kind::Base;
  int removed = 0;  // 1-based generator index, Removed only

  static SimplexVariant base() { return {Kind::Base, 0}; }
  static SimplexVariant enhanced() { return {Kind::Enhanced, 0}; }
  static SimplexVariant removed_edge(int k) { return {Kind::Removed, k}; }

  friend bool operator==(const SimplexVariant&, const SimplexVariant&) = default;
};

inline Shift unit_shift(int d, int i, int scale = 1) {
  Shift w(static_cast<std::size_t>(d), 0);
  w[static_cast<std::size_t>(i)] = scale;
  return w;
}

// Generators of a unit regular simplex with one vertex at the origin:
// |l_i| = 1 and <l_i, l_j> = 1/2, realized as an upper-triangular basis.
inline Mat regular_simplex_lattice(int d) {
  Mat gram = Mat::Constant(d, d, 0.5);
  gram.diagonal().setOnes();
  const Mat lower = gram.llt().matrixL();
  return lower.transpose();
}

inline PeriodicFramework simplex_framework(int d, SimplexVariant variant = SimplexVariant::base(),
                                           bool regular = false) {
  if (d < 2) throw Error(ErrorCode::InvalidDimension, "simplex family needs d >= 2");
  if (variant.kind == SimplexVariant::Kind::Removed && (variant.removed < 1 || variant.removed > d))
    throw Error(ErrorCode::InvalidDimension, "removed generator index out of 1.." + std::to_string(d));

  QuotientGraph graph;
  graph.dimension = d;
  graph.vertex_orbits = {kRed, kGreen};
  for (int i = 0; i < d; ++i) graph.edge_orbits.push_back({kGreen, kRed, unit_shift(d, i)});
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Shift w = unit_shift(d, i);
      w[static_cast<std::size_t>(j)] = 1;
      graph.edge_orbits.push_back({kGreen, kRed, w});
    }
  if (variant.kind != SimplexVariant::Kind::Base)
    for (int i = 0; i < d; ++i)
      if (variant.kind == SimplexVariant::Kind::Enhanced || i + 1 != variant.removed)
        graph.edge_orbits.push_back({kGreen, kRed, unit_shift(d, i, 2)});

  Placement placement;
  placement.lattice = regular ? regular_simplex_lattice(d) : Mat::Identity(d, d);
  placement.positions = {Vec::Zero(d), placement.lattice.rowwise().sum() / static_cast<double>(d + 1)};
  return validate_framework(std::move(graph), std::move(placement));
}

// Red orbit at the origin, green at (1/2, 1/2, -1/2), identity lattice, and
// green joined to the eight red corners of the unit cube in the order
// 0; e1, e2, e3; e1+e2, e2+e3, e3+e1; e1+e2+e3.
inline PeriodicFramework stressed_framework() {
  QuotientGraph graph;
  graph.dimension = 3;
  graph.vertex_orbits = {kRed, kGreen};
  const std::vector<Shift> corners = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                      {1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}};
  for (const Shift& w : corners) graph.edge_orbits.push_back({kGreen, kRed, w});

  Placement placement;
  placement.lattice = Mat::Identity(3, 3);
  placement.positions = {Vec::Zero(3), Vec{{0.5, 0.5, -0.5}}};
  return validate_framework(std::move(graph), std::move(placement));
}

inline PeriodicFramework with_edge_orbit(const PeriodicFramework& fw, const std::string& tail,
                                         const std::string& head, const Shift& shift) {
  QuotientGraph graph = fw.graph();
  graph.edge_orbits.push_back({tail, head, shift});
  fw.orbit_index(tail);
  fw.orbit_index(head);
  return validate_framework(std::move(graph), fw.placement());
}

inline PeriodicFramework remove_edge_orbit(const PeriodicFramework& fw, std::size_t k) {
  if (k >= fw.num_edges()) throw Error(ErrorCode::IndexOutOfRange, "edge orbit index " + std::to_string(k));
  QuotientGraph graph = fw.graph();
  graph.edge_orbits.erase(graph.edge_orbits.begin() + static_cast<std::ptrdiff_t>(k));
  return validate_framework(std::move(graph), fw.placement());
}

}  // namespace perigid
