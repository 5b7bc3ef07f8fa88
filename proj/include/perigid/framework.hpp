#pragma once

// Quotient data model for d-periodic bar-and-joint frameworks.
//
// A framework is stored through one representative per vertex orbit, a
// lattice basis (column c is generator c), and one record per edge orbit.
// An edge orbit (tail, head, shift) connects the tail representative to the
// head vertex translated by lattice * shift.

#include <perigid/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace perigid {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
// Integer coordinates with respect to the lattice generators.
using Shift = std::vector<int>;

struct EdgeOrbit {
  std::string tail;
  std::string head;
  Shift shift;

  friend bool operator==(const EdgeOrbit&, const EdgeOrbit&) = default;
};

struct QuotientGraph {
  int dimension = 0;
  std::vector<std::string> vertex_orbits;
  std::vector<EdgeOrbit> edge_orbits;
};

// Orbit representatives in the order of QuotientGraph::vertex_orbits, and the
// lattice basis stored column-wise.
struct Placement {
  std::vector<Vec> positions;
  Mat lattice;
};

inline Shift negated(const Shift& w) {
  Shift out(w.size());
  std::transform(w.begin(), w.end(), out.begin(), [](int x) { return -x; });
  return out;
}

inline bool is_zero(const Shift& w) {
  return std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
}

// Sign of the first nonzero entry (0 for the zero shift).
inline int leading_sign(const Shift& w) {
  for (int x : w) {
    if (x != 0) return x > 0 ? 1 : -1;
  }
  return 0;
}

// True when (tail, head, shift) is the stored orientation of its orbit.
// Distinct endpoints: tail id sorts before head id. Same endpoint: the first
// nonzero shift entry is positive, so (r, r, e1) is kept over (r, r, -e1).
inline bool is_canonical(const std::string& tail, const std::string& head, const Shift& shift) {
  if (tail != head) return tail < head;
  return leading_sign(shift) > 0;
}

inline EdgeOrbit reversed(const EdgeOrbit& e) { return {e.head, e.tail, negated(e.shift)}; }

inline EdgeOrbit canonical(const EdgeOrbit& e) {
  return is_canonical(e.tail, e.head, e.shift) ? e : reversed(e);
}

inline Vec lattice_vector(const Mat& lattice, const Shift& w) {
  Vec out = Vec::Zero(lattice.rows());
  for (std::size_t c = 0; c < w.size(); ++c) out += static_cast<double>(w[c]) * lattice.col(static_cast<Eigen::Index>(c));
  return out;
}

// Immutable validated framework. Construct through validate_framework().
class PeriodicFramework {
 public:
  int dimension() const { return graph_.dimension; }
  std::size_t num_orbits() const { return graph_.vertex_orbits.size(); }
  std::size_t num_edges() const { return graph_.edge_orbits.size(); }
  // Columns of the rigidity matrix: d*n vertex velocities then d*d lattice velocities.
  std::size_t num_unknowns() const {
    const auto d = static_cast<std::size_t>(dimension());
    return d * num_orbits() + d * d;
  }

  const QuotientGraph& graph() const { return graph_; }
  const Placement& placement() const { return placement_; }
  const Mat& lattice() const { return placement_.lattice; }
  const Vec& position(std::size_t orbit) const { return placement_.positions.at(orbit); }
  const std::vector<double>& edge_lengths() const { return edge_lengths_; }
  const EdgeOrbit& edge(std::size_t k) const {
    if (k >= num_edges()) throw Error(ErrorCode::IndexOutOfRange, "edge orbit index " + std::to_string(k));
    return graph_.edge_orbits[k];
  }
  std::size_t tail_index(std::size_t k) const { return ends_.at(k).first; }
  std::size_t head_index(std::size_t k) const { return ends_.at(k).second; }
  const std::string& orbit_id(std::size_t i) const { return graph_.vertex_orbits.at(i); }

  std::size_t orbit_index(const std::string& id) const {
    auto it = std::find(graph_.vertex_orbits.begin(), graph_.vertex_orbits.end(), id);
    if (it == graph_.vertex_orbits.end()) throw Error(ErrorCode::UnknownOrbit, "no vertex orbit '" + id + "'");
    return static_cast<std::size_t>(it - graph_.vertex_orbits.begin());
  }

  // Same graph at a different placement; caches are recomputed.
  PeriodicFramework with_placement(Placement placement) const;

 private:
  friend PeriodicFramework validate_framework(QuotientGraph graph, Placement placement);
  PeriodicFramework() = default;

  QuotientGraph graph_;
  Placement placement_;
  std::vector<std::pair<std::size_t, std::size_t>> ends_;
  std::vector<double> edge_lengths_;
};

// p_head + lattice * shift - p_tail for an arbitrary (not necessarily stored) record.
inline Vec edge_vector(const PeriodicFramework& fw, const std::string& tail, const std::string& head,
                       const Shift& shift) {
  if (shift.size() != static_cast<std::size_t>(fw.dimension()))
    throw Error(ErrorCode::DimensionMismatch, "shift length differs from dimension");
  return fw.position(fw.orbit_index(head)) + lattice_vector(fw.lattice(), shift) -
         fw.position(fw.orbit_index(tail));
}

inline Vec edge_vector(const PeriodicFramework& fw, std::size_t k) {
  const EdgeOrbit& e = fw.edge(k);
  return fw.position(fw.head_index(k)) + lattice_vector(fw.lattice(), e.shift) - fw.position(fw.tail_index(k));
}

// p_orbit + lattice * shift.
inline Vec realized_vertex(const PeriodicFramework& fw, const std::string& orbit, const Shift& shift) {
  const std::size_t i = fw.orbit_index(orbit);
  if (shift.size() != static_cast<std::size_t>(fw.dimension()))
    throw Error(ErrorCode::DimensionMismatch, "shift length differs from dimension");
  return fw.position(i) + lattice_vector(fw.lattice(), shift);
}

namespace detail {

inline void check_placement(const QuotientGraph& graph, const Placement& placement) {
  const int d = graph.dimension;
  if (placement.positions.size() != graph.vertex_orbits.size())
    throw Error(ErrorCode::DimensionMismatch, "position count differs from vertex orbit count");
  for (const Vec& p : placement.positions) {
    if (p.size() != d) throw Error(ErrorCode::DimensionMismatch, "position length differs from dimension");
    if (!p.allFinite()) throw Error(ErrorCode::DimensionMismatch, "non-finite position coordinate");
  }
  if (placement.lattice.rows() != d || placement.lattice.cols() != d)
    throw Error(ErrorCode::DimensionMismatch, "lattice must be d x d");
  if (!placement.lattice.allFinite()) throw Error(ErrorCode::SingularLattice, "non-finite lattice entry");

  double max_col = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) max_col = std::max(max_col, placement.lattice.col(c).norm());
  const double det = placement.lattice.determinant();
  if (!(std::abs(det) > 1e-12 * std::pow(max_col, d)))
    throw Error(ErrorCode::SingularLattice, "lattice determinant " + std::to_string(det));
}

}  // namespace detail

inline PeriodicFramework validate_framework(QuotientGraph graph, Placement placement) {
  const int d = graph.dimension;
  if (d < 1) throw Error(ErrorCode::InvalidDimension, "dimension must be positive");
  if (graph.vertex_orbits.empty()) throw Error(ErrorCode::InvalidDimension, "need at least one vertex orbit");
  for (std::size_t i = 0; i < graph.vertex_orbits.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (graph.vertex_orbits[i] == graph.vertex_orbits[j])
        throw Error(ErrorCode::DuplicateVertexOrbit, "vertex orbit '" + graph.vertex_orbits[i] + "' repeated");

  detail::check_placement(graph, placement);

  PeriodicFramework fw;
  fw.graph_ = std::move(graph);
  fw.placement_ = std::move(placement);

  for (EdgeOrbit& e : fw.graph_.edge_orbits) {
    if (e.shift.size() != static_cast<std::size_t>(d))
      throw Error(ErrorCode::DimensionMismatch, "edge shift length differs from dimension");
    if (e.tail == e.head && is_zero(e.shift))
      throw Error(ErrorCode::LoopEdge, "edge (" + e.tail + ", " + e.head + ") with zero shift");
    e = canonical(e);
  }
  const auto& edges = fw.graph_.edge_orbits;
  for (std::size_t k = 0; k < edges.size(); ++k)
    for (std::size_t l = 0; l < k; ++l)
      if (edges[k] == edges[l])
        throw Error(ErrorCode::DuplicateEdgeOrbit,
                    "edge orbits " + std::to_string(l) + " and " + std::to_string(k) + " coincide");

  fw.ends_.reserve(edges.size());
  for (const EdgeOrbit& e : edges) fw.ends_.emplace_back(fw.orbit_index(e.tail), fw.orbit_index(e.head));

  double scale = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) scale = std::max(scale, fw.lattice().col(c).norm());
  fw.edge_lengths_.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double len = edge_vector(fw, k).norm();
    if (!(len > 1e-12 * scale))
      throw Error(ErrorCode::ZeroLengthEdge, "edge orbit " + std::to_string(k) + " has zero length");
    fw.edge_lengths_.push_back(len);
  }
  return fw;
}

inline PeriodicFramework PeriodicFramework::with_placement(Placement placement) const {
  return validate_framework(graph_, std::move(placement));
}

// Motion vectors and configurations share one layout: d entries per vertex
// orbit in orbit order, then the lattice column-major (generator 1 first).

inline Vec pack_state(const Placement& placement) {
  const auto n = static_cast<Eigen::Index>(placement.positions.size());
  const Eigen::Index d = placement.lattice.rows();
  Vec x(d * n + d * d);
  for (Eigen::Index i = 0; i < n; ++i) x.segment(i * d, d) = placement.positions[static_cast<std::size_t>(i)];
  x.tail(d * d) = placement.lattice.reshaped();
  return x;
}

inline Placement unpack_state(const Vec& x, std::size_t num_orbits, int dimension) {
  const Eigen::Index d = dimension;
  const auto n = static_cast<Eigen::Index>(num_orbits);
  if (x.size() != d * n + d * d) throw Error(ErrorCode::DimensionMismatch, "state vector length");
  Placement out;
  out.positions.reserve(num_orbits);
  for (Eigen::Index i = 0; i < n; ++i) out.positions.emplace_back(x.segment(i * d, d));
  out.lattice = x.tail(d * d).reshaped(d, d);
  return out;
}

}  // namespace perigid
