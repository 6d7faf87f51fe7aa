#include "oddcycle/lp.hpp"

#include <cmath>
#include <stdexcept>

#include "oddcycle/errors.hpp"

namespace oddcycle {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
  int m = 0;       // constraint rows
  int cols = 0;    // structural + slack + artificial
  int structural = 0;
  int artificial_begin = 0;  // columns >= this are artificial
  std::vector<std::vector<double>> a;  // m rows of cols coefficients
  std::vector<double> rhs;             // m entries, kept nonnegative
  std::vector<int> basis;              // m entries, column index per row

  // Reduced-cost row z_j - c_j and current objective value.
  std::vector<double> obj;
  double obj_value = 0.0;

  void build_objective(const std::vector<double>& c) {
    obj.assign(cols, 0.0);
    obj_value = 0.0;
    for (int j = 0; j < cols; ++j) obj[j] = -c[j];
    for (int i = 0; i < m; ++i) {
      double cb = c[basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols; ++j) obj[j] += cb * a[i][j];
      obj_value += cb * rhs[i];
    }
  }

  void pivot(int row, int col) {
    double p = a[row][col];
    for (int j = 0; j < cols; ++j) a[row][j] /= p;
    rhs[row] /= p;
    a[row][col] = 1.0;  // cancel roundoff on the pivot itself
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = a[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
      a[i][col] = 0.0;
      rhs[i] -= f * rhs[row];
      if (rhs[i] < 0.0 && rhs[i] > -kTol) rhs[i] = 0.0;
    }
    double f = obj[col];
    if (f != 0.0) {
      for (int j = 0; j < cols; ++j) obj[j] -= f * a[row][j];
      obj[col] = 0.0;
      obj_value -= f * rhs[row];
    }
    basis[row] = col;
  }

  // Returns false at optimum, throws on unbounded when allowed.
  enum class Step { Optimal, Pivoted, Unbounded };

  Step iterate(bool bland, bool allow_artificial_entering) {
    int col = -1;
    double best = -kTol;
    for (int j = 0; j < cols; ++j) {
      if (!allow_artificial_entering && j >= artificial_begin) continue;
      if (obj[j] < best) {
        col = j;
        if (bland) break;  // smallest eligible index
        best = obj[j];
      }
    }
    if (col < 0) return Step::Optimal;

    int row = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (a[i][col] <= kTol) continue;
      double ratio = rhs[i] / a[i][col];
      if (row < 0 || ratio < best_ratio - kTol ||
          (ratio < best_ratio + kTol && basis[i] < basis[row])) {
        row = i;
        best_ratio = ratio;
      }
    }
    if (row < 0) return Step::Unbounded;
    pivot(row, col);
    return Step::Pivoted;
  }
};

}  // namespace

LpResult solve(const LinearProgram& lp) {
  int n = lp.num_vars;
  int m = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.objective.size()) != n)
    throw ValidationError("objective length does not match variable count");
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.coeffs.size()) != n)
      throw ValidationError("constraint length does not match variable count");

  // Normalize to nonnegative right-hand sides.
  std::vector<LpRow> rows = lp.rows;
  for (auto& row : rows) {
    if (row.rhs < 0.0) {
      for (double& c : row.coeffs) c = -c;
      row.rhs = -row.rhs;
      if (row.sense == RowSense::LessEq)
        row.sense = RowSense::GreaterEq;
      else if (row.sense == RowSense::GreaterEq)
        row.sense = RowSense::LessEq;
    }
  }

  int num_slack = 0;
  for (const auto& row : rows)
    if (row.sense != RowSense::Equal) ++num_slack;
  int num_artificial = 0;
  for (const auto& row : rows)
    if (row.sense != RowSense::LessEq) ++num_artificial;

  Tableau t;
  t.m = m;
  t.structural = n;
  t.artificial_begin = n + num_slack;
  t.cols = n + num_slack + num_artificial;
  t.a.assign(m, std::vector<double>(t.cols, 0.0));
  t.rhs.resize(m);
  t.basis.assign(m, -1);

  int slack_at = n;
  int art_at = t.artificial_begin;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.a[i][j] = rows[i].coeffs[j];
    t.rhs[i] = rows[i].rhs;
    switch (rows[i].sense) {
      case RowSense::LessEq:
        t.a[i][slack_at] = 1.0;
        t.basis[i] = slack_at++;
        break;
      case RowSense::GreaterEq:
        t.a[i][slack_at] = -1.0;
        ++slack_at;
        t.a[i][art_at] = 1.0;
        t.basis[i] = art_at++;
        break;
      case RowSense::Equal:
        t.a[i][art_at] = 1.0;
        t.basis[i] = art_at++;
        break;
    }
  }

  long iteration_cap = 2000L + 200L * (static_cast<long>(m) + t.cols);
  long bland_after = 100L + 10L * (static_cast<long>(m) + t.cols);

  auto run_phase = [&](bool allow_artificial) -> Tableau::Step {
    for (long it = 0; it < iteration_cap; ++it) {
      Tableau::Step s = t.iterate(it > bland_after, allow_artificial);
      if (s != Tableau::Step::Pivoted) return s;
    }
    throw std::runtime_error("simplex iteration limit exceeded");
  };

  if (num_artificial > 0) {
    std::vector<double> c1(t.cols, 0.0);
    for (int j = t.artificial_begin; j < t.cols; ++j) c1[j] = -1.0;
    t.build_objective(c1);
    run_phase(true);
    if (t.obj_value < -1e-7) return {LpStatus::Infeasible, 0.0, {}};
    // Drive leftover artificials out of the basis where possible; a fully
    // zero row is redundant and its artificial stays basic at level zero.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < t.artificial_begin) continue;
      for (int j = 0; j < t.artificial_begin; ++j) {
        if (std::fabs(t.a[i][j]) > kTol) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<double> c2(t.cols, 0.0);
  for (int j = 0; j < n; ++j) c2[j] = lp.objective[j];
  t.build_objective(c2);
  Tableau::Step s = run_phase(false);
  if (s == Tableau::Step::Unbounded) return {LpStatus::Unbounded, 0.0, {}};

  LpResult result;
  result.status = LpStatus::Optimal;
  result.value = t.obj_value;
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) result.x[t.basis[i]] = t.rhs[i];
  return result;
}

}  // namespace oddcycle
