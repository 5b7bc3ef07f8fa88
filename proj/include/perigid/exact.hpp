#pragma once

// Exact rational arithmetic. Every finite double is a dyadic rational, so the
// conversion below is lossless and exact verdicts apply to the stored inputs.

#include <Eigen/Dense>

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace perigid {

using Rational = boost::multiprecision::cpp_rational;

inline Rational to_rational(double x) { return Rational(x); }

inline std::vector<Rational> to_rational(const Eigen::VectorXd& v) {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out.emplace_back(v[i]);
  return out;
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Rational& x : v) out.push_back(x.convert_to<double>());
  return out;
}

}  // namespace perigid
