#pragma once

// Finite periodic deformations by predictor-corrector continuation, and an
// audit of pairwise distances along the resulting path.

#include <perigid/error.hpp>
#include <perigid/expansive.hpp>
#include <perigid/framework.hpp>
#include <perigid/rigidity.hpp>

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace perigid {

struct ContinuationOptions {
  int steps = 50;
  double step_size = 0.01;  // in units of the shortest edge length
  double newton_tol = 1e-10;
  int max_newton_iterations = 25;
  double rank_tol = kDefaultRankTolerance;
};

struct MotionPath {
  std::vector<PeriodicFramework> frames;  // frames[0] is the input framework
  std::vector<Vec> tangents;              // unit tangent used to leave each frame
  std::vector<double> residuals;          // max | |e_k| - L_k | after correction
  Vec direction_seed;
  double step_size = 0.0;  // absolute predictor step along the unit tangent
  std::string pinning;

  std::size_t num_steps() const { return frames.size(); }
};

namespace detail {

// Columns left free by the gauge: orbit 0 pinned, and the strictly lower
// triangle of the lattice correction held at zero.
inline std::vector<Eigen::Index> gauge_free_columns(const PeriodicFramework& fw) {
  const Eigen::Index d = fw.dimension();
  const auto n = static_cast<Eigen::Index>(fw.num_orbits());
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index r = 0; r < d; ++r) cols.push_back(i * d + r);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r <= c; ++r) cols.push_back(d * n + c * d + r);
  return cols;
}

inline double length_residual(const PeriodicFramework& fw, const std::vector<double>& target) {
  double worst = 0.0;
  for (std::size_t k = 0; k < fw.num_edges(); ++k)
    worst = std::max(worst, std::abs(edge_vector(fw, k).norm() - target[k]));
  return worst;
}

inline Vec project_onto(const Mat& basis, const Vec& v) { return basis * (basis.transpose() * v); }

// Adds the infinitesimal isometry that zeroes t on the gauge-fixed columns,
// so a predictor step leaves orbit 0 and the lower lattice triangle alone.
inline Vec gauged(const PeriodicFramework& fw, const Vec& t, const std::vector<Eigen::Index>& free_cols) {
  std::vector<bool> is_free(static_cast<std::size_t>(t.size()), false);
  for (Eigen::Index c : free_cols) is_free[static_cast<std::size_t>(c)] = true;
  const Mat trivial = trivial_motion_basis(fw);
  Mat g(trivial.cols(), trivial.cols());
  Vec rhs(trivial.cols());
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < t.size(); ++c) {
    if (is_free[static_cast<std::size_t>(c)]) continue;
    g.row(r) = trivial.row(c);
    rhs[r++] = t[c];
  }
  return t - trivial * g.completeOrthogonalDecomposition().solve(rhs);
}

}  // namespace detail

// Follows the deformation leaving fw in the given flex direction.
// Predictor: x + step * t. Corrector: minimum-norm Newton steps on the
// squared edge lengths within the gauge. The next tangent is the current
// one projected onto the flex space at the new point.
inline MotionPath continue_motion(const PeriodicFramework& fw, const Vec& direction,
                                  const ContinuationOptions& opts = {}) {
  if (!(opts.step_size > 0.0)) throw Error(ErrorCode::InvalidDimension, "step size must be positive");
  require_flex(fw, direction);

  const RigidityReport start = analyze(fw, opts.rank_tol);
  Vec tangent = detail::project_onto(start.flex_basis, direction);
  if (!(tangent.norm() > 1e-12 * std::max(1.0, direction.norm())))
    throw Error(ErrorCode::NotAFlex, "direction has no nontrivial flex component");
  tangent.normalize();

  const std::vector<double>& lengths = fw.edge_lengths();
  double shortest = std::numeric_limits<double>::infinity();
  for (double l : lengths) shortest = std::min(shortest, l);
  if (lengths.empty())
    for (Eigen::Index c = 0; c < fw.lattice().cols(); ++c) shortest = std::min(shortest, fw.lattice().col(c).norm());

  MotionPath path;
  path.direction_seed = direction;
  path.step_size = opts.step_size * shortest;
  path.pinning = "orbit " + fw.orbit_id(0) + " pinned; strictly lower triangle of lattice correction zero";
  path.frames.push_back(fw);
  path.residuals.push_back(detail::length_residual(fw, lengths));

  const std::vector<Eigen::Index> free_cols = detail::gauge_free_columns(fw);
  const auto n_free = static_cast<Eigen::Index>(free_cols.size());
  const auto m = static_cast<Eigen::Index>(fw.num_edges());

  for (int step = 1; step <= opts.steps; ++step) {
    path.tangents.push_back(tangent);
    Vec x = pack_state(path.frames.back().placement()) +
            path.step_size * detail::gauged(path.frames.back(), tangent, free_cols);
    PeriodicFramework current = fw.with_placement(unpack_state(x, fw.num_orbits(), fw.dimension()));

    double residual = detail::length_residual(current, lengths);
    for (int it = 0; residual >= opts.newton_tol; ++it) {
      if (it == opts.max_newton_iterations)
        throw Error(ErrorCode::NewtonDivergence, "step " + std::to_string(step) + " residual " +
                                                     std::to_string(residual));
      const Mat jac = rigidity_matrix(current).rows;
      Mat jac_free(m, n_free);
      for (Eigen::Index j = 0; j < n_free; ++j) jac_free.col(j) = jac.col(free_cols[static_cast<std::size_t>(j)]);
      Vec g(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const double len = lengths[static_cast<std::size_t>(k)];
        g[k] = 0.5 * (edge_vector(current, static_cast<std::size_t>(k)).squaredNorm() - len * len);
      }
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(jac_free);
      cod.setThreshold(opts.rank_tol);
      const Vec delta = cod.solve(-g);
      for (Eigen::Index j = 0; j < n_free; ++j) x[free_cols[static_cast<std::size_t>(j)]] += delta[j];
      current = fw.with_placement(unpack_state(x, fw.num_orbits(), fw.dimension()));
      residual = detail::length_residual(current, lengths);
    }

    RigidityReport here;
    try {
      here = analyze(current, opts.rank_tol);
    } catch (const Error& ex) {
      if (ex.code() != ErrorCode::IllConditioned) throw;
      throw Error(ErrorCode::SingularJacobianAtPoint, "step " + std::to_string(step) + ": " + ex.what());
    }
    if (here.rank != start.rank)
      throw Error(ErrorCode::SingularJacobianAtPoint,
                  "rank " + std::to_string(here.rank) + " at step " + std::to_string(step) + ", started at " +
                      std::to_string(start.rank));
    Vec next = detail::project_onto(here.flex_basis, tangent);
    if (!(next.norm() > 1e-6))
      throw Error(ErrorCode::SingularJacobianAtPoint, "tangent lost at step " + std::to_string(step));
    tangent = next.normalized();

    path.frames.push_back(std::move(current));
    path.residuals.push_back(residual);
  }
  return path;
}

// The same path traversed backwards.
inline MotionPath reversed(const MotionPath& path) {
  MotionPath out = path;
  std::reverse(out.frames.begin(), out.frames.end());
  std::reverse(out.residuals.begin(), out.residuals.end());
  std::reverse(out.tangents.begin(), out.tangents.end());
  for (Vec& t : out.tangents) t = -t;
  out.direction_seed = -path.direction_seed;
  return out;
}

struct PairViolation {
  std::size_t pair = 0;  // index into ExpansionAudit::pairs
  std::size_t step = 0;  // distance dropped between step - 1 and step
  double decrement = 0.0;
};

struct ExpansionAudit {
  int radius = kDefaultRadius;
  std::vector<PairConstraint> pairs;   // enumerated at frame 0
  std::vector<double> min_increment;   // per pair, over consecutive steps
  std::vector<PairViolation> violations;
  bool passed = false;
};

inline double pair_distance(const PeriodicFramework& fw, const PairConstraint& pc) {
  return (fw.position(pc.b) + lattice_vector(fw.lattice(), pc.shift) - fw.position(pc.a)).norm();
}

// Checks that every pair distance within radius is nondecreasing from step
// to step up to audit_tol.
inline ExpansionAudit audit_expansiveness(const MotionPath& path, int radius = kDefaultRadius,
                                          double audit_tol = 1e-8) {
  if (path.frames.size() < 2) throw Error(ErrorCode::InvalidDimension, "audit needs at least two steps");
  ExpansionAudit audit;
  audit.radius = radius;
  audit.pairs = enumerate_pairs(path.frames.front(), radius);
  audit.min_increment.assign(audit.pairs.size(), std::numeric_limits<double>::infinity());
  for (std::size_t p = 0; p < audit.pairs.size(); ++p) {
    double prev = pair_distance(path.frames[0], audit.pairs[p]);
    for (std::size_t s = 1; s < path.frames.size(); ++s) {
      const double cur = pair_distance(path.frames[s], audit.pairs[p]);
      const double inc = cur - prev;
      audit.min_increment[p] = std::min(audit.min_increment[p], inc);
      if (inc < -audit_tol) audit.violations.push_back({p, s, -inc});
      prev = cur;
    }
  }
  audit.passed = audit.violations.empty();
  return audit;
}

// First step at which some pair contracts, if any.
inline std::optional<std::size_t> first_violation_step(const ExpansionAudit& audit, std::size_t pair) {
  std::optional<std::size_t> out;
  for (const PairViolation& v : audit.violations)
    if (v.pair == pair && (!out || v.step < *out)) out = v.step;
  return out;
}

inline void write_audit_csv(std::ostream& os, const ExpansionAudit& audit, int dimension) {
  os << "orbit_a,orbit_b";
  for (int c = 1; c <= dimension; ++c) os << ",shift_" << c;
  os << ",min_increment,first_violation_step\n";
  char buf[32];
  for (std::size_t p = 0; p < audit.pairs.size(); ++p) {
    const PairConstraint& pc = audit.pairs[p];
    os << pc.orbit_a << ',' << pc.orbit_b;
    for (int x : pc.shift) os << ',' << x;
    std::snprintf(buf, sizeof buf, "%.12g", audit.min_increment[p]);
    os << ',' << buf << ',';
    if (auto s = first_violation_step(audit, p)) os << *s;
    os << '\n';
  }
}

// True when fw has two orbits and its edge orbits, oriented away from the
// non-origin orbit, are l_i, l_i + l_j and optionally some 2 l_i offsets.
inline bool is_simplex_family(const PeriodicFramework& fw) {
  if (fw.num_orbits() != 2) return false;
  const int d = fw.dimension();
  std::vector<bool> single(static_cast<std::size_t>(d), false);
  std::map<std::pair<int, int>, bool> pair_seen;
  for (std::size_t k = 0; k < fw.num_edges(); ++k) {
    if (fw.tail_index(k) == fw.head_index(k)) return false;
    // Orient from orbit 1 (center) to orbit 0 (simplex vertices).
    Shift w = fw.edge(k).shift;
    if (fw.tail_index(k) == 0) w = negated(w);
    std::vector<int> support;
    for (int c = 0; c < d; ++c)
      if (w[static_cast<std::size_t>(c)] != 0) support.push_back(c);
    if (support.size() == 1 && w[static_cast<std::size_t>(support[0])] == 1)
      single[static_cast<std::size_t>(support[0])] = true;
    else if (support.size() == 1 && w[static_cast<std::size_t>(support[0])] == 2)
      continue;
    else if (support.size() == 2 && w[static_cast<std::size_t>(support[0])] == 1 &&
             w[static_cast<std::size_t>(support[1])] == 1)
      pair_seen[{support[0], support[1]}] = true;
    else
      return false;
  }
  return std::all_of(single.begin(), single.end(), [](bool b) { return b; }) &&
         pair_seen.size() == binomial2(static_cast<std::size_t>(d));
}

// Distance between the parallel hyperplanes through {l_i} and {2 l_i}.
// With nu solving L^T nu = (1, ..., 1) they are <nu, x> = 1 and <nu, x> = 2,
// so the distance is 1 / |nu|.
inline std::vector<double> facet_separation(const MotionPath& path) {
  std::vector<double> out;
  for (const PeriodicFramework& fw : path.frames) {
    if (!is_simplex_family(fw)) throw Error(ErrorCode::NotSimplexFamily, "framework is not a simplex-family variant");
    const Vec nu = fw.lattice().transpose().fullPivLu().solve(Vec::Ones(fw.dimension()));
    out.push_back(1.0 / nu.norm());
  }
  return out;
}

enum class FrameFormat { Obj, Csv };

// Writes frame_%04d.obj per step, or a single frames.csv plus edges.csv,
// for the vertices with shifts in [-supercell, supercell]^d.
inline std::vector<std::filesystem::path> export_frames(const MotionPath& path, int supercell, FrameFormat format,
                                                        const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string());
  if (path.frames.empty()) return {};

  const PeriodicFramework& first = path.frames.front();
  const int d = first.dimension();
  std::vector<Shift> box;
  detail::for_each_shift(d, supercell, [&](const Shift& w) { box.push_back(w); });
  std::map<Shift, std::size_t> box_index;
  for (std::size_t i = 0; i < box.size(); ++i) box_index[box[i]] = i;
  const auto vertex_id = [&](std::size_t orbit, std::size_t cell) { return orbit * box.size() + cell; };

  // Bars inside the box, as (vertex, vertex) pairs of 0-based ids.
  std::vector<std::pair<std::size_t, std::size_t>> bars;
  for (std::size_t k = 0; k < first.num_edges(); ++k) {
    for (std::size_t c = 0; c < box.size(); ++c) {
      Shift w = box[c];
      for (int r = 0; r < d; ++r) w[static_cast<std::size_t>(r)] += first.edge(k).shift[static_cast<std::size_t>(r)];
      auto it = box_index.find(w);
      if (it == box_index.end()) continue;
      bars.emplace_back(vertex_id(first.tail_index(k), c), vertex_id(first.head_index(k), it->second));
    }
  }

  char buf[40];
  const auto fmt = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };

  std::vector<fs::path> written;
  if (format == FrameFormat::Obj) {
    for (std::size_t s = 0; s < path.frames.size(); ++s) {
      std::snprintf(buf, sizeof buf, "frame_%04zu.obj", s);
      const fs::path file = dir / buf;
      std::ofstream out(file);
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + file.string());
      const PeriodicFramework& fw = path.frames[s];
      for (std::size_t i = 0; i < fw.num_orbits(); ++i)
        for (const Shift& w : box) {
          const Vec p = fw.position(i) + lattice_vector(fw.lattice(), w);
          out << 'v';
          for (int r = 0; r < d; ++r) out << ' ' << fmt(p[r]);
          for (int r = d; r < 3; ++r) out << " 0";
          out << '\n';
        }
      for (const auto& [u, v] : bars) out << "l " << u + 1 << ' ' << v + 1 << '\n';
      if (!out) throw Error(ErrorCode::IoError, "write failed for " + file.string());
      written.push_back(file);
    }
    return written;
  }

  const fs::path vfile = dir / "frames.csv";
  std::ofstream out(vfile);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + vfile.string());
  out << "step,orbit";
  for (int r = 1; r <= d; ++r) out << ",shift_" << r;
  for (int r = 1; r <= d; ++r) out << ",x_" << r;
  out << '\n';
  for (std::size_t s = 0; s < path.frames.size(); ++s) {
    const PeriodicFramework& fw = path.frames[s];
    for (std::size_t i = 0; i < fw.num_orbits(); ++i)
      for (const Shift& w : box) {
        const Vec p = fw.position(i) + lattice_vector(fw.lattice(), w);
        out << s << ',' << fw.orbit_id(i);
        for (int x : w) out << ',' << x;
        for (int r = 0; r < d; ++r) out << ',' << fmt(p[r]);
        out << '\n';
      }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + vfile.string());
  written.push_back(vfile);

  const fs::path efile = dir / "edges.csv";
  std::ofstream eout(efile);
  if (!eout) throw Error(ErrorCode::IoError, "cannot write " + efile.string());
  eout << "orbit_a";
  for (int r = 1; r <= d; ++r) eout << ",shift_a_" << r;
  eout << ",orbit_b";
  for (int r = 1; r <= d; ++r) eout << ",shift_b_" << r;
  eout << '\n';
  for (const auto& [u, v] : bars) {
    eout << first.orbit_id(u / box.size());
    for (int x : box[u % box.size()]) eout << ',' << x;
    eout << ',' << first.orbit_id(v / box.size());
    for (int x : box[v % box.size()]) eout << ',' << x;
    eout << '\n';
  }
  written.push_back(efile);
  return written;
}

}  // namespace perigid
