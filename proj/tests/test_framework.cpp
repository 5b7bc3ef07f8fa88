#include <perigid/constructions.hpp>
#include <perigid/framework.hpp>
#include <perigid/framework_io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace perigid;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::NumericalFailure;
}

QuotientGraph two_orbit_graph() {
  QuotientGraph g;
  g.dimension = 2;
  g.vertex_orbits = {"a", "b"};
  g.edge_orbits = {{"a", "b", {0, 0}}, {"a", "b", {1, 0}}};
  return g;
}

Placement two_orbit_placement() {
  return {{Vec{{0.0, 0.0}}, Vec{{0.3, 0.4}}}, Mat::Identity(2, 2)};
}

}  // namespace

TEST(Framework, StressedExampleIsValid) {
  const auto fw = stressed_framework();
  EXPECT_EQ(fw.dimension(), 3);
  EXPECT_EQ(fw.num_orbits(), 2u);
  EXPECT_EQ(fw.num_edges(), 8u);
  EXPECT_EQ(fw.num_unknowns(), 15u);
}

TEST(Framework, ValidationErrors) {
  auto g = two_orbit_graph();
  g.edge_orbits.push_back({"a", "a", {0, 0}});
  EXPECT_EQ(code_of([&] { validate_framework(g, two_orbit_placement()); }), ErrorCode::LoopEdge);

  g = two_orbit_graph();
  g.edge_orbits.push_back({"b", "a", {-1, 0}});  // same orbit as (a, b, e1)
  EXPECT_EQ(code_of([&] { validate_framework(g, two_orbit_placement()); }), ErrorCode::DuplicateEdgeOrbit);

  auto p = two_orbit_placement();
  p.lattice.col(1) = p.lattice.col(0);
  EXPECT_EQ(code_of([&] { validate_framework(two_orbit_graph(), p); }), ErrorCode::SingularLattice);

  p = two_orbit_placement();
  p.positions[1] = p.positions[0];
  EXPECT_EQ(code_of([&] { validate_framework(two_orbit_graph(), p); }), ErrorCode::ZeroLengthEdge);

  p = two_orbit_placement();
  p.positions[1] = Vec{{0.1, 0.2, 0.3}};
  EXPECT_EQ(code_of([&] { validate_framework(two_orbit_graph(), p); }), ErrorCode::DimensionMismatch);

  g = two_orbit_graph();
  g.vertex_orbits[1] = "a";
  EXPECT_EQ(code_of([&] { validate_framework(g, two_orbit_placement()); }), ErrorCode::DuplicateVertexOrbit);
}

TEST(Framework, SameOrbitEdgeWithShiftIsNotALoop) {
  auto g = two_orbit_graph();
  g.edge_orbits.push_back({"a", "a", {0, 1}});
  EXPECT_NO_THROW(validate_framework(g, two_orbit_placement()));
}

TEST(Framework, EdgeVectorExamples) {
  const auto st = stressed_framework();
  EXPECT_TRUE(edge_vector(st, 0).isApprox(Vec{{-0.5, -0.5, 0.5}}, 1e-15));

  const auto sx = simplex_framework(3);
  EXPECT_TRUE(edge_vector(sx, 0).isApprox(Vec{{0.75, -0.25, -0.25}}, 1e-15));

  for (std::size_t k = 0; k < st.num_edges(); ++k)
    EXPECT_NEAR(edge_vector(st, k).norm(), st.edge_lengths()[k], 1e-15);
  EXPECT_EQ(code_of([&] { edge_vector(st, 8); }), ErrorCode::IndexOutOfRange);
}

TEST(Framework, ReversedStorageNegates) {
  const auto fw = stressed_framework();
  const Shift w{1, 1, 0};
  EXPECT_TRUE(edge_vector(fw, kRed, kGreen, negated(w)).isApprox(-edge_vector(fw, kGreen, kRed, w)));
}

TEST(Framework, InputOrientationIsCanonicalized) {
  QuotientGraph g = two_orbit_graph();
  g.edge_orbits[1] = {"b", "a", {-1, 0}};
  const auto fw = validate_framework(g, two_orbit_placement());
  EXPECT_EQ(fw.edge(1), (EdgeOrbit{"a", "b", {1, 0}}));
}

TEST(Framework, RealizedVertex) {
  const auto fw = stressed_framework();
  EXPECT_TRUE(realized_vertex(fw, kRed, {1, 0, 0}).isApprox(Vec{{1.0, 0.0, 0.0}}));
  EXPECT_TRUE(realized_vertex(fw, kGreen, {0, 0, 0}).isApprox(Vec{{0.5, 0.5, -0.5}}));
  EXPECT_TRUE(realized_vertex(fw, kRed, {1, 1, 0}).isApprox(Vec{{1.0, 1.0, 0.0}}));
  EXPECT_EQ(code_of([&] { realized_vertex(fw, "blue", {0, 0, 0}); }), ErrorCode::UnknownOrbit);
}

TEST(FrameworkIo, RoundTripIsBitExact) {
  for (const auto& fw : {stressed_framework(), simplex_framework(4, SimplexVariant::removed_edge(2), true)}) {
    const std::string text = framework_to_string(fw);
    const auto back = framework_from_string(text);
    EXPECT_EQ(framework_to_string(back), text);
    EXPECT_EQ(back.lattice(), fw.lattice());
    for (std::size_t i = 0; i < fw.num_orbits(); ++i) EXPECT_EQ(back.position(i), fw.position(i));
    for (std::size_t k = 0; k < fw.num_edges(); ++k) EXPECT_EQ(back.edge(k), fw.edge(k));
  }
}

TEST(FrameworkIo, RejectsMalformedInput) {
  const std::string good = framework_to_string(stressed_framework());
  auto j = nlohmann::json::parse(good);
  j["comment"] = "x";
  EXPECT_EQ(code_of([&] { framework_from_json(j); }), ErrorCode::ParseError);

  j = nlohmann::json::parse(good);
  j["edge_orbits"][0]["shift"][0] = 0.5;
  EXPECT_EQ(code_of([&] { framework_from_json(j); }), ErrorCode::ParseError);

  j = nlohmann::json::parse(good);
  j["edge_orbits"][0]["head"] = "blue";
  EXPECT_EQ(code_of([&] { framework_from_json(j); }), ErrorCode::UnknownOrbit);

  EXPECT_EQ(code_of([&] { framework_from_string("{not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { load_framework("/nonexistent/fw.json"); }), ErrorCode::IoError);
}

TEST(FrameworkIo, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "perigid_io_test.json";
  save_framework(stressed_framework(), path.string());
  EXPECT_EQ(framework_to_string(load_framework(path.string())), framework_to_string(stressed_framework()));
  std::filesystem::remove(path);
}

TEST(Framework, PackUnpackState) {
  const auto fw = simplex_framework(3, SimplexVariant::base(), true);
  const Vec x = pack_state(fw.placement());
  ASSERT_EQ(static_cast<std::size_t>(x.size()), fw.num_unknowns());
  const Placement p = unpack_state(x, fw.num_orbits(), fw.dimension());
  EXPECT_EQ(p.lattice, fw.lattice());
  EXPECT_EQ(p.positions[1], fw.position(1));
}
