#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oddcycle/lp.hpp"
#include "oddcycle/rng.hpp"

using namespace oddcycle;

namespace {

LinearProgram program(int vars, std::vector<double> obj, std::vector<LpRow> rows) {
  LinearProgram lp;
  lp.num_vars = vars;
  lp.objective = std::move(obj);
  lp.rows = std::move(rows);
  return lp;
}

// Brute-force reference: evaluate every basic solution from every subset of
// tight constraints via Gaussian elimination. Good up to ~8 variables.
struct Reference {
  bool feasible = false;
  double best = 0.0;
};

bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& out) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-9) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = b[i] / a[i][i];
  return true;
}

// All constraints here are <= with x >= 0; enumerate vertices of the
// polytope by choosing which inequalities (rows or axis bounds) are tight.
Reference enumerate_optimum(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  const int total = n + m;  // candidate tight constraints: x_i = 0 or row j
  Reference ref;
  std::vector<int> pick(static_cast<std::size_t>(n));
  // Iterate over all subsets of size n via combinations.
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i = 0; i < n; ++i) {
      int k = idx[static_cast<std::size_t>(i)];
      std::vector<double> row(static_cast<std::size_t>(n), 0.0);
      if (k < n) {
        row[static_cast<std::size_t>(k)] = 1.0;
        b.push_back(0.0);
      } else {
        const LpRow& r = lp.rows[static_cast<std::size_t>(k - n)];
        row = r.coeffs;
        b.push_back(r.rhs);
      }
      a.push_back(std::move(row));
    }
    std::vector<double> x;
    if (solve_square(a, b, x)) {
      bool ok = true;
      for (double v : x)
        if (v < -1e-7) ok = false;
      for (const LpRow& r : lp.rows) {
        double lhs = 0.0;
        for (int i = 0; i < n; ++i)
          lhs += r.coeffs[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        bool sat = r.sense == RowSense::LessEq    ? lhs <= r.rhs + 1e-7
                   : r.sense == RowSense::GreaterEq ? lhs >= r.rhs - 1e-7
                                                    : std::fabs(lhs - r.rhs) <= 1e-7;
        if (!sat) ok = false;
      }
      if (ok) {
        double val = 0.0;
        for (int i = 0; i < n; ++i)
          val += lp.objective[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        if (!ref.feasible || val > ref.best) ref.best = val;
        ref.feasible = true;
      }
    }
    // Next combination.
    int pos = n - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == total - n + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < n; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  (void)pick;
  return ref;
}

}  // namespace

TEST_CASE("textbook two-variable optimum") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
  LinearProgram lp = program(2, {3, 5},
                             {{{1, 0}, RowSense::LessEq, 4},
                              {{0, 2}, RowSense::LessEq, 12},
                              {{3, 2}, RowSense::LessEq, 18}});
  LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(36.0).epsilon(1e-9));
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.x[1] == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("equality and greater-equal rows") {
  // max x + y with x + y = 5, x >= 2 -> value 5.
  LinearProgram lp = program(2, {1, 1},
                             {{{1, 1}, RowSense::Equal, 5},
                              {{1, 0}, RowSense::GreaterEq, 2}});
  LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(r.x[0] >= 2.0 - 1e-9);
}

TEST_CASE("infeasible program detected") {
  LinearProgram lp = program(1, {1},
                             {{{1}, RowSense::GreaterEq, 3},
                              {{1}, RowSense::LessEq, 2}});
  CHECK(solve(lp).status == LpStatus::Infeasible);

  // Equality that nonnegative variables cannot reach.
  LinearProgram neg = program(2, {1, 1}, {{{1, 1}, RowSense::Equal, -1}});
  CHECK(solve(neg).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded program detected") {
  LinearProgram lp = program(2, {1, 1}, {{{1, -1}, RowSense::LessEq, 1}});
  CHECK(solve(lp).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate vertices do not stall") {
  // Multiple constraints meet at the optimum (0, 1).
  LinearProgram lp = program(2, {0, 1},
                             {{{1, 1}, RowSense::LessEq, 1},
                              {{-1, 1}, RowSense::LessEq, 1},
                              {{0, 1}, RowSense::LessEq, 1}});
  LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero objective reports a feasible point") {
  LinearProgram lp = program(2, {0, 0}, {{{1, 1}, RowSense::Equal, 2}});
  LpResult r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.x[0] + r.x[1] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("random programs agree with vertex enumeration") {
  Rng rng(987654321);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng.below(3));  // 2..4 variables
    int m = 2 + static_cast<int>(rng.below(4));  // 2..5 rows
    LinearProgram lp;
    lp.num_vars = n;
    for (int i = 0; i < n; ++i) lp.objective.push_back(rng.unit() * 4 - 2);
    for (int j = 0; j < m; ++j) {
      LpRow row;
      for (int i = 0; i < n; ++i) row.coeffs.push_back(rng.unit() * 4 - 2);
      // Nonnegative rhs with <= keeps the origin feasible, so the reference
      // enumeration and the solver must agree on optimality or unboundedness.
      row.sense = RowSense::LessEq;
      row.rhs = rng.unit() * 5;
      lp.rows.push_back(row);
    }
    LpResult got = solve(lp);
    if (got.status == LpStatus::Unbounded) continue;  // reference can't see rays
    REQUIRE(got.status == LpStatus::Optimal);
    Reference ref = enumerate_optimum(lp);
    REQUIRE(ref.feasible);
    CHECK(got.value == doctest::Approx(ref.best).epsilon(1e-6));
    ++solved;
  }
  CHECK(solved > 20);  // most random instances are bounded
}
