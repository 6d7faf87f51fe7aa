#pragma once

#include <vector>

namespace oddcycle {

// Dense linear programs over nonnegative variables:
//   maximize c.x  subject to  rows, x >= 0.
// Free variables must be split by the caller (x = u - v).

enum class RowSense { LessEq, GreaterEq, Equal };

struct LpRow {
  std::vector<double> coeffs;
  RowSense sense = RowSense::LessEq;
  double rhs = 0.0;
};

struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

// Two-phase primal simplex. Dantzig pricing with a switch to Bland's rule
// after a fixed iteration budget guards against cycling.
LpResult solve(const LinearProgram& lp);

}  // namespace oddcycle
