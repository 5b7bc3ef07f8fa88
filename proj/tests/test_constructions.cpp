#include <perigid/constructions.hpp>
#include <perigid/framework_io.hpp>
#include <perigid/rigidity.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace perigid;

TEST(SimplexFamily, EdgeCounts) {
  for (int d = 2; d <= 5; ++d) {
    const auto c2 = static_cast<std::size_t>(d * (d - 1) / 2);
    const auto du = static_cast<std::size_t>(d);
    EXPECT_EQ(simplex_framework(d).num_edges(), du + c2);
    EXPECT_EQ(simplex_framework(d, SimplexVariant::enhanced()).num_edges(), 2 * du + c2);
    for (int k = 1; k <= d; ++k) EXPECT_EQ(simplex_framework(d, SimplexVariant::removed_edge(k)).num_edges(), 2 * du + c2 - 1);
    EXPECT_EQ(simplex_framework(d).num_orbits(), 2u);
  }
}

TEST(SimplexFamily, DegreesOfFreedom) {
  for (int d = 2; d <= 5; ++d) {
    for (bool regular : {false, true}) {
      EXPECT_EQ(analyze(simplex_framework(d, SimplexVariant::base(), regular)).dof, d);
      const auto enhanced = simplex_framework(d, SimplexVariant::enhanced(), regular);
      EXPECT_EQ(analyze(enhanced).dof, 0);
      EXPECT_TRUE(is_minimally_rigid(enhanced));
      for (int k = 1; k <= d; ++k)
        EXPECT_EQ(analyze(simplex_framework(d, SimplexVariant::removed_edge(k), regular)).dof, 1) << d << " " << k;
    }
  }
}

TEST(SimplexFamily, Placement) {
  const auto fw = simplex_framework(3);
  EXPECT_TRUE(fw.position(0).isZero(0.0));
  EXPECT_TRUE(fw.position(1).isApprox(Vec::Constant(3, 0.25)));

  const Mat l = regular_simplex_lattice(4);
  const Mat gram = l.transpose() * l;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(gram(i, j), i == j ? 1.0 : 0.5, 1e-14);
  // the green center is equidistant from the simplex corners 0, l_1, ..., l_d
  const auto reg = simplex_framework(4, SimplexVariant::base(), true);
  const double r0 = reg.position(1).norm();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR((reg.position(1) - l.col(i)).norm(), r0, 1e-14);
}

TEST(SimplexFamily, PermutingGeneratorsPermutesRemovals) {
  // swapping lattice generators i, j maps Removed(i) onto Removed(j); both stay one-dof with equal spectra
  for (int d = 3; d <= 4; ++d) {
    const auto a = analyze(simplex_framework(d, SimplexVariant::removed_edge(1)));
    const auto b = analyze(simplex_framework(d, SimplexVariant::removed_edge(d)));
    ASSERT_EQ(a.singular_values.size(), b.singular_values.size());
    EXPECT_TRUE(a.singular_values.isApprox(b.singular_values, 1e-12));
  }
}

TEST(SimplexFamily, InvalidArguments) {
  EXPECT_THROW(simplex_framework(1), Error);
  EXPECT_THROW(simplex_framework(3, SimplexVariant::removed_edge(0)), Error);
  EXPECT_THROW(simplex_framework(3, SimplexVariant::removed_edge(4)), Error);
}

TEST(StressedExample, Construction) {
  const auto fw = stressed_framework();
  EXPECT_EQ(fw.num_orbits(), 2u);
  EXPECT_EQ(fw.num_edges(), 8u);
  EXPECT_TRUE(fw.position(fw.orbit_index(kGreen)).isApprox(Vec{{0.5, 0.5, -0.5}}));
  const auto r = analyze(fw);
  EXPECT_EQ(r.dof, 2);
  EXPECT_EQ(r.stress_dim(), 1);
}

TEST(Surgery, InsertAndRemove) {
  const auto st = stressed_framework();
  EXPECT_EQ(analyze(with_edge_orbit(st, kRed, kRed, {1, 0, 0})).dof, 1);
  EXPECT_THROW(with_edge_orbit(st, kGreen, kRed, {1, 0, 0}), Error);
  EXPECT_THROW(with_edge_orbit(st, kRed, kRed, {0, 0, 0}), Error);
  EXPECT_THROW(remove_edge_orbit(st, 8), Error);

  const auto planar = remove_edge_orbit(simplex_framework(2, SimplexVariant::enhanced()), 3);
  EXPECT_EQ(planar.edge(planar.num_edges() - 1).shift, (Shift{0, 2}));
  EXPECT_EQ(analyze(planar).dof, 1);

  for (std::size_t k = 0; k < st.num_edges(); ++k) {
    const EdgeOrbit e = st.edge(k);
    const auto back = with_edge_orbit(remove_edge_orbit(st, k), e.tail, e.head, e.shift);
    auto lhs = st.graph().edge_orbits, rhs = back.graph().edge_orbits;
    auto key = [](const EdgeOrbit& x) { return std::tie(x.tail, x.head, x.shift); };
    std::sort(lhs.begin(), lhs.end(), [&](auto& p, auto& q) { return key(p) < key(q); });
    std::sort(rhs.begin(), rhs.end(), [&](auto& p, auto& q) { return key(p) < key(q); });
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(analyze(back).rank, analyze(st).rank);
  }
}
