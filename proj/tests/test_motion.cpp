#include <perigid/constructions.hpp>
#include <perigid/motion.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace perigid;
namespace fs = std::filesystem;

namespace {

Vec expanding_flex(const PeriodicFramework& fw) {
  Vec u = analyze(fw).flex_basis.col(0);
  return classify_flex(fw, u) == Expansiveness::EffectivelyExpansive ? u : Vec(-u);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("perigid_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Continuation, PlanarMechanismKeepsLengths) {
  const auto fw = simplex_framework(2, SimplexVariant::removed_edge(1));
  const auto path = continue_motion(fw, expanding_flex(fw));
  ASSERT_EQ(path.num_steps(), 51u);
  for (double r : path.residuals) EXPECT_LT(r, 1e-10);
  for (const auto& frame : path.frames)
    for (std::size_t k = 0; k < fw.num_edges(); ++k) {
      const double l0 = fw.edge_lengths()[k];
      EXPECT_LT(std::abs(edge_vector(frame, k).squaredNorm() - l0 * l0), 10 * 1e-10);
    }
  EXPECT_TRUE(audit_expansiveness(path).passed);
}

TEST(Continuation, GaugeHoldsFirstOrbitAndLatticeShape) {
  const auto fw = simplex_framework(3, SimplexVariant::removed_edge(2), true);
  ContinuationOptions opts;
  opts.steps = 10;
  const auto path = continue_motion(fw, expanding_flex(fw), opts);
  const Mat l0 = fw.lattice();
  for (const auto& frame : path.frames) {
    EXPECT_TRUE(frame.position(0).isZero(1e-12));
    const Mat diff = frame.lattice() - l0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < r; ++c) EXPECT_NEAR(diff(r, c), 0.0, 1e-12);
  }
}

TEST(Continuation, TangentsVaryContinuously) {
  for (int d = 2; d <= 3; ++d)
    for (int k = 1; k <= d; ++k) {
      const auto fw = simplex_framework(d, SimplexVariant::removed_edge(k), true);
      const auto path = continue_motion(fw, expanding_flex(fw));
      for (std::size_t s = 1; s < path.tangents.size(); ++s)
        EXPECT_LT(oracle::angle_between(path.tangents[s - 1], path.tangents[s]), 0.1);
    }
}

TEST(Continuation, FirstOrderMatchesPairRows) {
  for (int d = 2; d <= 3; ++d) {
    const auto fw = simplex_framework(d, SimplexVariant::removed_edge(1), true);
    ContinuationOptions opts;
    opts.steps = 1;
    const auto path = continue_motion(fw, expanding_flex(fw), opts);
    const double h = path.step_size;
    const Vec t = path.tangents[0];
    for (const auto& pc : enumerate_pairs(fw, 2)) {
      // d|s|/dt = <row, t> / |s|
      const double predicted = pc.evaluate(t) / pc.separation.norm();
      const double fd = (pair_distance(path.frames[1], pc) - pair_distance(path.frames[0], pc)) / h;
      EXPECT_NEAR(fd, predicted, 10 * h);
    }
  }
}

TEST(Continuation, RigidAndBadDirections) {
  const auto rigid = simplex_framework(3, SimplexVariant::enhanced());
  Vec u = Vec::Zero(static_cast<Eigen::Index>(rigid.num_unknowns()));
  u[0] = 1.0;
  EXPECT_THROW(continue_motion(rigid, u), Error);
  const Vec trivial = analyze(rigid).trivial_basis.col(0);
  try {
    continue_motion(rigid, trivial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAFlex);
  }
  ContinuationOptions bad;
  bad.step_size = 0.0;
  const auto mech = simplex_framework(2, SimplexVariant::removed_edge(1));
  EXPECT_THROW(continue_motion(mech, expanding_flex(mech), bad), Error);
}

TEST(Audit, ExpandingPassesReversedFails) {
  const auto fw = simplex_framework(3, SimplexVariant::removed_edge(1), true);
  const auto path = continue_motion(fw, expanding_flex(fw));
  const auto audit = audit_expansiveness(path, 2);
  EXPECT_TRUE(audit.passed);
  const auto back = audit_expansiveness(reversed(path), 2);
  EXPECT_FALSE(back.passed);
  EXPECT_FALSE(back.violations.empty());

  const auto sep = facet_separation(path);
  for (std::size_t s = 1; s < sep.size(); ++s) EXPECT_GT(sep[s], sep[s - 1]);
}

TEST(Audit, OutsideTheConeFails) {
  const auto fw = simplex_framework(2, SimplexVariant::removed_edge(2));
  ContinuationOptions opts;
  opts.steps = 5;
  EXPECT_FALSE(audit_expansiveness(continue_motion(fw, -expanding_flex(fw), opts)).passed);
}

TEST(Audit, StressedRayKeepsItsPeriod) {
  const auto st = stressed_framework();
  const auto cone = expansive_cone(st, analyze(st));
  const auto pairs = enumerate_pairs(st, 2);
  for (std::size_t i = 0; i < cone.rays.size(); ++i) {
    const auto mech = ray_mechanism(st, cone, i);
    ContinuationOptions opts;
    opts.steps = 20;
    auto path = continue_motion(mech, cone.ray_motion(i), opts);
    for (auto& f : path.frames) f = st.with_placement(f.placement());
    const auto audit = audit_expansiveness(path);
    EXPECT_TRUE(audit.passed);
    // the inserted bar is a pair whose distance stays put
    const EdgeOrbit& bar = mech.edge(mech.num_edges() - 1);
    int matched = 0;
    for (std::size_t p = 0; p < audit.pairs.size(); ++p) {
      const auto& pc = audit.pairs[p];
      if (pc.orbit_a != bar.tail || pc.orbit_b != bar.head || pc.shift != bar.shift) continue;
      ++matched;
      EXPECT_NEAR(pair_distance(path.frames.back(), pc), pair_distance(path.frames.front(), pc), 1e-8);
    }
    EXPECT_EQ(matched, 1);
  }
}

TEST(FacetSeparation, RequiresSimplexFamily) {
  const auto st = stressed_framework();
  MotionPath path;
  path.frames.push_back(st);
  EXPECT_THROW(facet_separation(path), Error);
  path.frames = {simplex_framework(3), simplex_framework(3)};
  const auto sep = facet_separation(path);
  EXPECT_DOUBLE_EQ(sep[0], sep[1]);
  EXPECT_NEAR(sep[0], 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(Export, ObjFrames) {
  const auto st = stressed_framework();
  const auto cone = expansive_cone(st, analyze(st));
  ContinuationOptions opts;
  opts.steps = 2;
  auto path = continue_motion(ray_mechanism(st, cone, 0), cone.ray_motion(0), opts);
  const auto dir = scratch_dir("obj");
  const auto files = export_frames(path, 1, FrameFormat::Obj, dir);
  ASSERT_EQ(files.size(), 3u);
  for (std::size_t s = 0; s < files.size(); ++s) {
    std::ifstream in(files[s]);
    std::string line;
    std::vector<Vec> verts;
    while (std::getline(in, line)) {
      ASSERT_TRUE(line.rfind("v ", 0) == 0 || line.rfind("l ", 0) == 0) << line;
      if (line[0] == 'v') {
        std::istringstream ls(line.substr(2));
        Vec p(3);
        ls >> p[0] >> p[1] >> p[2];
        verts.push_back(p);
      }
    }
    ASSERT_EQ(verts.size(), 2u * 27u);
    // vertex order: orbit-major, then shifts with the last coordinate fastest
    EXPECT_TRUE(verts[0].isApprox(realized_vertex(path.frames[s], kRed, {-1, -1, -1}), 1e-10));
    EXPECT_TRUE(verts[27 + 13].isApprox(realized_vertex(path.frames[s], kGreen, {0, 0, 0}), 1e-10));
  }
  fs::remove_all(dir);
}

TEST(Export, CsvFrames) {
  const auto fw = simplex_framework(2, SimplexVariant::removed_edge(1));
  ContinuationOptions opts;
  opts.steps = 3;
  const auto path = continue_motion(fw, expanding_flex(fw), opts);
  const auto dir = scratch_dir("csv");
  export_frames(path, 1, FrameFormat::Csv, dir);
  std::ifstream in(dir / "frames.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "step,orbit,shift_1,shift_2,x_1,x_2");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 4 * 2 * 9);
  EXPECT_TRUE(fs::exists(dir / "edges.csv"));
  fs::remove_all(dir);
  EXPECT_THROW(export_frames(path, 1, FrameFormat::Csv, "/proc/perigid_nope"), Error);
}
