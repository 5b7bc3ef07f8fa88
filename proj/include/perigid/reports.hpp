#pragma once

// JSON views of analysis results. Key order is fixed; doubles are written at
// full round-trip precision.

#include <perigid/cones.hpp>
#include <perigid/expansive.hpp>
#include <perigid/rigidity.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace perigid {

using OrderedJson = nlohmann::ordered_json;

namespace detail {

inline OrderedJson vec_json(const Vec& v) {
  OrderedJson arr = OrderedJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline OrderedJson columns_json(const Mat& m) {
  OrderedJson arr = OrderedJson::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(vec_json(m.col(c)));
  return arr;
}

}  // namespace detail

inline OrderedJson report_json(const RigidityReport& r) {
  OrderedJson j;
  j["rank"] = r.rank;
  j["dof"] = r.dof;
  j["stress_dim"] = r.stress_dim();
  j["flex_basis"] = detail::columns_json(r.flex_basis);
  j["stress_basis"] = detail::columns_json(r.stress_basis);
  j["tolerance"] = r.tolerance_used;
  return j;
}

inline OrderedJson star_json(const ConeAnalysis& a) {
  OrderedJson j;
  j["orbit"] = a.orbit;
  j["lineality_dim"] = a.lineality_dim();
  j["pointed_codim2"] = a.pointed_codim2;
  j["separating_normal"] = a.separating_normal ? detail::vec_json(*a.separating_normal) : OrderedJson(nullptr);
  j["positive_dependence"] =
      a.positive_dependence ? detail::vec_json(*a.positive_dependence) : OrderedJson(nullptr);
  return j;
}

inline OrderedJson cone_json(const ExpansiveCone& cone, std::optional<int> stable) {
  OrderedJson j;
  j["flex_dim"] = cone.flex_dim();
  j["radius"] = cone.radius;
  j["stable_radius"] = stable ? *stable : -1;
  j["num_halfspaces"] = cone.halfspace_matrix.rows();
  OrderedJson rays = OrderedJson::array(), motions = OrderedJson::array();
  for (std::size_t i = 0; i < cone.rays.size(); ++i) {
    rays.push_back(detail::vec_json(cone.rays[i]));
    motions.push_back(detail::vec_json(cone.ray_motion(i)));
  }
  j["rays"] = rays;
  j["ray_motions"] = motions;
  return j;
}

}  // namespace perigid
