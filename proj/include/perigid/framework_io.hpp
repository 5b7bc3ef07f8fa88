#pragma once

// JSON serialization of frameworks.
//
//   {"dimension": 3,
//    "vertex_orbits": [{"id": "red", "position": [0, 0, 0]}, ...],
//    "lattice": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
//    "edge_orbits": [{"tail": "green", "head": "red", "shift": [1, 0, 0]}, ...]}
//
// lattice[r][c] is coordinate r of generator c. Unknown keys are rejected.

#include <perigid/error.hpp>
#include <perigid/framework.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace perigid {

// 17 significant digits, enough to round-trip any finite double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::ParseError, where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw Error(ErrorCode::ParseError, "unknown field '" + it.key() + "' in " + where);
  for (const auto& key : allowed)
    if (!obj.contains(key)) throw Error(ErrorCode::ParseError, "missing field '" + key + "' in " + where);
}

inline Vec to_vec(const nlohmann::json& arr, const std::string& where) {
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, where + " must be an array");
  Vec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw Error(ErrorCode::ParseError, where + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

inline void write_vec(std::ostream& os, const Vec& v) {
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_double(v[i]);
  os << ']';
}

inline std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace detail

inline PeriodicFramework framework_from_json(const nlohmann::json& doc) {
  using detail::reject_unknown_keys;
  reject_unknown_keys(doc, {"dimension", "vertex_orbits", "lattice", "edge_orbits"}, "framework");
  if (!doc["dimension"].is_number_integer()) throw Error(ErrorCode::ParseError, "dimension must be an integer");

  QuotientGraph graph;
  Placement placement;
  graph.dimension = doc["dimension"].get<int>();
  if (graph.dimension < 1) throw Error(ErrorCode::InvalidDimension, "dimension must be positive");
  const auto d = static_cast<Eigen::Index>(graph.dimension);

  if (!doc["vertex_orbits"].is_array()) throw Error(ErrorCode::ParseError, "vertex_orbits must be an array");
  for (const auto& v : doc["vertex_orbits"]) {
    reject_unknown_keys(v, {"id", "position"}, "vertex orbit");
    if (!v["id"].is_string()) throw Error(ErrorCode::ParseError, "vertex orbit id must be a string");
    graph.vertex_orbits.push_back(v["id"].get<std::string>());
    placement.positions.push_back(detail::to_vec(v["position"], "position"));
  }

  const auto& lat = doc["lattice"];
  if (!lat.is_array() || static_cast<Eigen::Index>(lat.size()) != d)
    throw Error(ErrorCode::DimensionMismatch, "lattice must have d rows");
  placement.lattice.resize(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const Vec row = detail::to_vec(lat[static_cast<std::size_t>(r)], "lattice row");
    if (row.size() != d) throw Error(ErrorCode::DimensionMismatch, "lattice row must have d entries");
    placement.lattice.row(r) = row.transpose();
  }

  if (!doc["edge_orbits"].is_array()) throw Error(ErrorCode::ParseError, "edge_orbits must be an array");
  for (const auto& e : doc["edge_orbits"]) {
    reject_unknown_keys(e, {"tail", "head", "shift"}, "edge orbit");
    if (!e["tail"].is_string() || !e["head"].is_string())
      throw Error(ErrorCode::ParseError, "edge endpoints must be strings");
    EdgeOrbit edge{e["tail"].get<std::string>(), e["head"].get<std::string>(), {}};
    if (!e["shift"].is_array()) throw Error(ErrorCode::ParseError, "shift must be an array");
    for (const auto& x : e["shift"]) {
      if (!x.is_number_integer()) throw Error(ErrorCode::ParseError, "shift entries must be integers");
      edge.shift.push_back(x.get<int>());
    }
    for (const auto* id : {&edge.tail, &edge.head})
      if (std::find(graph.vertex_orbits.begin(), graph.vertex_orbits.end(), *id) == graph.vertex_orbits.end())
        throw Error(ErrorCode::UnknownOrbit, "edge references unknown orbit '" + *id + "'");
    graph.edge_orbits.push_back(std::move(edge));
  }
  return validate_framework(std::move(graph), std::move(placement));
}

inline PeriodicFramework framework_from_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
  return framework_from_json(doc);
}

inline std::string framework_to_string(const PeriodicFramework& fw) {
  std::ostringstream os;
  const auto d = static_cast<Eigen::Index>(fw.dimension());
  os << "{\n  \"dimension\": " << fw.dimension() << ",\n  \"vertex_orbits\": [";
  for (std::size_t i = 0; i < fw.num_orbits(); ++i) {
    os << (i ? ",\n" : "\n") << "    {\"id\": " << detail::quoted(fw.orbit_id(i)) << ", \"position\": ";
    detail::write_vec(os, fw.position(i));
    os << '}';
  }
  os << "\n  ],\n  \"lattice\": [";
  for (Eigen::Index r = 0; r < d; ++r) {
    os << (r ? ",\n" : "\n") << "    ";
    detail::write_vec(os, fw.lattice().row(r).transpose());
  }
  os << "\n  ],\n  \"edge_orbits\": [";
  for (std::size_t k = 0; k < fw.num_edges(); ++k) {
    const EdgeOrbit& e = fw.edge(k);
    os << (k ? ",\n" : "\n") << "    {\"tail\": " << detail::quoted(e.tail) << ", \"head\": " << detail::quoted(e.head)
       << ", \"shift\": [";
    for (std::size_t c = 0; c < e.shift.size(); ++c) os << (c ? ", " : "") << e.shift[c];
    os << "]}";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

inline PeriodicFramework load_framework(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return framework_from_string(buf.str());
}

inline void save_framework(const PeriodicFramework& fw, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << framework_to_string(fw);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace perigid
