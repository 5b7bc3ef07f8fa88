#include <perigid/cones.hpp>
#include <perigid/constructions.hpp>
#include <perigid/exact.hpp>
#include <perigid/feasibility.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace perigid;

namespace {

// Same system handed to the FM oracle: equalities split in two, bounds as -x <= -l.
bool fm_verdict(const LinearSystem<Rational>& sys) {
  std::vector<oracle::Ineq> eqs, ineqs;
  for (std::size_t i = 0; i < sys.rows.size(); ++i) eqs.push_back({sys.rows[i], sys.rhs[i]});
  for (std::size_t j = 0; j < sys.num_vars; ++j) {
    if (!sys.lower[j]) continue;
    oracle::Ineq q{oracle::QRow(sys.num_vars, 0), -*sys.lower[j]};
    q.a[j] = -1;
    ineqs.push_back(q);
  }
  return oracle::fm_feasible_eq(eqs, ineqs, sys.num_vars);
}

template <class T>
void expect_solution_satisfies(const LinearSystem<T>& sys, const std::vector<T>& x, double tol) {
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    T lhs(0);
    for (std::size_t j = 0; j < sys.num_vars; ++j) lhs += sys.rows[i][j] * x[j];
    EXPECT_LE(static_cast<double>(detail::abs_value(T(lhs - sys.rhs[i]))), tol);
  }
  for (std::size_t j = 0; j < sys.num_vars; ++j)
    if (sys.lower[j]) {
      EXPECT_GE(static_cast<double>(x[j] - *sys.lower[j]), -tol);
    }
}

}  // namespace

TEST(Feasibility, SumOfBoundedVariablesCannotVanish) {
  LinearSystem<double> sys;
  sys.num_vars = 2;
  sys.lower = {1.0, 1.0};
  sys.add_row({1.0, 1.0}, 0.0);
  EXPECT_FALSE(solve_linear_feasibility(sys, 1e-9));
}

TEST(Feasibility, EqualVariables) {
  LinearSystem<double> sys;
  sys.num_vars = 2;
  sys.lower = {1.0, 1.0};
  sys.add_row({1.0, -1.0}, 0.0);
  const auto x = solve_linear_feasibility(sys, 1e-9);
  ASSERT_TRUE(x);
  EXPECT_NEAR((*x)[0], (*x)[1], 1e-12);
  EXPECT_GE((*x)[0], 1.0 - 1e-12);
}

TEST(Feasibility, FreeVariablesAndEigenOverload) {
  const Eigen::MatrixXd a{{1.0, 1.0}, {1.0, -1.0}};
  const auto x = solve_linear_feasibility(a, Eigen::VectorXd{{-3.0, 1.0}}, {std::nullopt, std::nullopt});
  ASSERT_TRUE(x);
  EXPECT_NEAR((*x)[0], -1.0, 1e-12);
  EXPECT_NEAR((*x)[1], -2.0, 1e-12);
  EXPECT_FALSE(solve_linear_feasibility(a, Eigen::VectorXd{{-3.0, 1.0}}, {0.0, std::nullopt}));
}

TEST(Feasibility, NoRows) {
  LinearSystem<double> sys;
  sys.num_vars = 3;
  sys.lower = {2.0, std::nullopt, 0.0};
  const auto x = solve_linear_feasibility(sys, 1e-9);
  ASSERT_TRUE(x);
  EXPECT_GE((*x)[0], 2.0);
}

TEST(Feasibility, ShapeMismatch) {
  LinearSystem<double> sys;
  sys.num_vars = 2;
  sys.lower = {0.0};
  EXPECT_THROW(solve_linear_feasibility(sys, 1e-9), Error);
}

TEST(Feasibility, StressedStarSystemsAgreeWithElimination) {
  // The green center sits below the cube face z = 0, so its eight bars all
  // point upward: no positive dependence, and h = e3 separates them.
  const auto star = vertex_star(stressed_framework(), kGreen);
  ASSERT_EQ(star.vectors.size(), 8u);
  const auto rows = detail::as_rational_rows(star.vectors);

  const auto dep = dependence_system(rows);
  EXPECT_FALSE(fm_verdict(dep));
  EXPECT_FALSE(solve_linear_feasibility(dep, Rational(0)));
  EXPECT_FALSE(positive_dependence(star));

  // <h, v_i> - s_i = 1, h free, s >= 0: the 8 x 3 separation system
  LinearSystem<Rational> sep;
  sep.num_vars = 3 + 8;
  sep.lower.assign(3, std::nullopt);
  sep.lower.resize(11, Rational(0));
  for (std::size_t i = 0; i < 8; ++i) {
    std::vector<Rational> row(11, Rational(0));
    for (std::size_t c = 0; c < 3; ++c) row[c] = rows[i][c];
    row[3 + i] = -1;
    sep.add_row(row, Rational(1));
  }
  EXPECT_TRUE(fm_verdict(sep));
  const auto exact = solve_linear_feasibility(sep, Rational(0));
  ASSERT_TRUE(exact);
  expect_solution_satisfies(sep, *exact, 0.0);
  EXPECT_TRUE(analyze_star(star, 3).separating_normal);
}

TEST(Feasibility, RandomSystemsFloatingRationalAndEliminationAgree) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coef(-3, 3), shape(1, 3), bound(-1, 2), coin(0, 3);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(shape(rng)), m = static_cast<std::size_t>(shape(rng));
    LinearSystem<double> fsys;
    LinearSystem<Rational> qsys;
    fsys.num_vars = qsys.num_vars = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (coin(rng) == 0) {
        fsys.lower.push_back(std::nullopt);
        qsys.lower.push_back(std::nullopt);
      } else {
        const int l = bound(rng);
        fsys.lower.push_back(double(l));
        qsys.lower.push_back(Rational(l));
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> fr(n);
      std::vector<Rational> qr(n);
      for (std::size_t j = 0; j < n; ++j) qr[j] = fr[j] = coef(rng);
      const int rhs = coef(rng);
      fsys.add_row(fr, rhs);
      qsys.add_row(qr, rhs);
    }
    const bool oracle_verdict = fm_verdict(qsys);
    const auto fx = solve_linear_feasibility(fsys, 1e-9);
    const auto qx = solve_linear_feasibility(qsys, Rational(0));
    EXPECT_EQ(fx.has_value(), oracle_verdict) << "trial " << trial;
    EXPECT_EQ(qx.has_value(), oracle_verdict) << "trial " << trial;
    if (fx) expect_solution_satisfies(fsys, *fx, 1e-8);
    if (qx) expect_solution_satisfies(qsys, *qx, 0.0);
    (oracle_verdict ? feasible : infeasible)++;
  }
  EXPECT_GT(feasible, 30);
  EXPECT_GT(infeasible, 30);
}

TEST(Feasibility, Deterministic) {
  const VectorStar star{"c", {Vec{{1.0, 0.0}}, Vec{{-1.0, 1.0}}, Vec{{-1.0, -1.0}}}};
  const auto a = positive_dependence(star), b = positive_dependence(star);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(*a, *b);
}
