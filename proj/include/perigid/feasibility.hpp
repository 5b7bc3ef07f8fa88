#pragma once

// Linear feasibility: find x with A x = b and x_j >= lower_j (or x_j free).
//
// Phase-one simplex on a dense tableau with Bland's rule, templated on the
// scalar so the same routine runs in floating point (tolerance tol) and in
// exact rational arithmetic (tol = 0).

#include <perigid/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <vector>

namespace perigid {

inline constexpr double kDefaultFeasibilityTolerance = 1e-9;

template <class T>
struct LinearSystem {
  std::size_t num_vars = 0;
  std::vector<std::vector<T>> rows;  // equality rows, each of length num_vars
  std::vector<T> rhs;
  std::vector<std::optional<T>> lower;  // nullopt marks a free variable

  void add_row(std::vector<T> row, T value) {
    rows.push_back(std::move(row));
    rhs.push_back(std::move(value));
  }
};

namespace detail {

template <class T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
class PhaseOneTableau {
 public:
  PhaseOneTableau(const std::vector<std::vector<T>>& a, const std::vector<T>& b, std::size_t structural, T tol)
      : rows_(a.size()), structural_(structural), tol_(tol) {
    cols_ = structural_ + rows_;
    tab_.assign(rows_, std::vector<T>(cols_ + 1, T(0)));
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const bool flip = b[i] < T(0);
      for (std::size_t j = 0; j < structural_; ++j) tab_[i][j] = flip ? T(-a[i][j]) : a[i][j];
      tab_[i][structural_ + i] = T(1);
      tab_[i][cols_] = flip ? T(-b[i]) : b[i];
      basis_[i] = structural_ + i;
    }
    cost_.assign(cols_ + 1, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < structural_; ++j) cost_[j] -= tab_[i][j];
    for (std::size_t i = 0; i < rows_; ++i) cost_[cols_] -= tab_[i][cols_];
  }

  // Runs Bland's rule to optimality; returns false when the cap is hit.
  bool run(std::size_t max_iterations) {
    for (std::size_t it = 0; it < max_iterations; ++it) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (cost_[j] < T(-tol_)) {
          enter = j;
          break;
        }
      if (enter == cols_) return true;

      std::size_t leave = rows_;
      T best_ratio(0);
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!(tab_[i][enter] > tol_)) continue;
        T ratio = tab_[i][cols_] / tab_[i][enter];
        if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      // Phase one is bounded below by zero; an unbounded column means the
      // arithmetic has drifted.
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
    return false;
  }

  // Sum of artificial variables at the current basis.
  T infeasibility() const { return T(-cost_[cols_]); }

  std::vector<T> structural_values() const {
    std::vector<T> y(structural_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      if (basis_[i] < structural_) y[basis_[i]] = tab_[i][cols_];
    if constexpr (std::is_floating_point_v<T>)
      for (T& v : y) v = std::max(v, T(0));
    return y;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const T p = tab_[r][c];
    for (T& x : tab_[r]) x /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || tab_[i][c] == T(0)) continue;
      const T f = tab_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[r][j];
    }
    if (cost_[c] != T(0)) {
      const T f = cost_[c];
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] -= f * tab_[r][j];
    }
    basis_[r] = c;
  }

  std::size_t rows_;
  std::size_t structural_;
  std::size_t cols_ = 0;
  T tol_;
  std::vector<std::vector<T>> tab_;
  std::vector<T> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Returns a feasible point, or nullopt when the system is infeasible.
// Deterministic for a fixed row and variable order.
template <class T>
std::optional<std::vector<T>> solve_linear_feasibility(const LinearSystem<T>& sys, T tol) {
  const std::size_t n = sys.num_vars;
  if (sys.lower.size() != n || sys.rows.size() != sys.rhs.size())
    throw Error(ErrorCode::DimensionMismatch, "feasibility system shape");
  for (const auto& row : sys.rows)
    if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "feasibility row length");

  // Shift bounded variables to y >= 0; split free variables into y+ - y-.
  std::vector<std::size_t> column_of(n);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    column_of[j] = ncols;
    ncols += sys.lower[j] ? 1 : 2;
  }

  const std::size_t m = sys.rows.size();
  std::vector<std::vector<T>> a(m, std::vector<T>(ncols, T(0)));
  std::vector<T> b(sys.rhs);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const T& coef = sys.rows[i][j];
      a[i][column_of[j]] = coef;
      if (sys.lower[j])
        b[i] -= coef * *sys.lower[j];
      else
        a[i][column_of[j] + 1] = T(-coef);
    }
    if constexpr (std::is_floating_point_v<T>) {
      T scale(0);
      for (const T& x : a[i]) scale = std::max(scale, detail::abs_value(x));
      scale = std::max(scale, detail::abs_value(b[i]));
      if (scale > T(0)) {
        for (T& x : a[i]) x /= scale;
        b[i] /= scale;
      }
    }
  }

  detail::PhaseOneTableau<T> tableau(a, b, ncols, tol);
  const std::size_t cap = 50 * (m + ncols) + 1000;
  if (!tableau.run(cap)) throw Error(ErrorCode::NumericalFailure, "simplex iteration cap or unbounded phase one");

  T feasibility_slack = tol;
  if constexpr (std::is_floating_point_v<T>) feasibility_slack = tol * static_cast<T>(std::max<std::size_t>(m, 1));
  if (tableau.infeasibility() > feasibility_slack) return std::nullopt;

  const std::vector<T> y = tableau.structural_values();
  std::vector<T> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (sys.lower[j])
      x[j] = y[column_of[j]] + *sys.lower[j];
    else
      x[j] = y[column_of[j]] - y[column_of[j] + 1];
  }
  if constexpr (std::is_floating_point_v<T>) {
    // Certificate check in the caller's scaling.
    for (std::size_t i = 0; i < m; ++i) {
      T lhs(0), mag(0);
      for (std::size_t j = 0; j < n; ++j) {
        lhs += sys.rows[i][j] * x[j];
        mag += detail::abs_value(sys.rows[i][j] * x[j]);
      }
      const T err = detail::abs_value(lhs - sys.rhs[i]);
      if (err > 1e3 * tol * (1 + mag + detail::abs_value(sys.rhs[i])))
        throw Error(ErrorCode::NumericalFailure, "feasible point fails equality residual check");
    }
  }
  return x;
}

// Floating-point convenience overload on Eigen types.
inline std::optional<Eigen::VectorXd> solve_linear_feasibility(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                                               const std::vector<std::optional<double>>& lower,
                                                               double tol = kDefaultFeasibilityTolerance) {
  LinearSystem<double> sys;
  sys.num_vars = static_cast<std::size_t>(a.cols());
  sys.lower = lower;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    std::vector<double> row(sys.num_vars);
    for (Eigen::Index j = 0; j < a.cols(); ++j) row[static_cast<std::size_t>(j)] = a(i, j);
    sys.add_row(std::move(row), b[i]);
  }
  auto x = solve_linear_feasibility(sys, tol);
  if (!x) return std::nullopt;
  return Eigen::Map<const Eigen::VectorXd>(x->data(), static_cast<Eigen::Index>(x->size()));
}

}  // namespace perigid
