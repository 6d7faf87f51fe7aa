#pragma once

#include <vector>

namespace oddcycle {

// Bound chain for the 4n-event exclusivity structure, normalized by the 2n
// uniform queries: alpha/2n <= classical value, theta/2n = quantum value,
// alpha*/2n = no-signaling value (= 1).
struct BoundsReport {
  int n = 0;
  double alpha = 0.0;       // independence number (integer valued)
  double theta = 0.0;       // Lovasz number
  double alpha_star = 0.0;  // fractional packing number
  double omega_c_value = 0.0;
  double omega_q_upper = 0.0;
  double omega_ns = 0.0;
  bool computed = false;  // true: exact solvers ran; false: closed forms
  std::vector<int> independent_set;  // witness (computed mode)
  std::vector<int> mobius_mapping;   // isomorphism witness (computed mode)
};

// Exact solver path; the 64-vertex cap limits it to n <= 13 (order 4n).
// Cross-checks the ladder isomorphism, the sandwich alpha <= theta <=
// alpha*, and theta/2n against the quantum game value before returning.
BoundsReport bounds_report(int n);

// Closed forms alpha = 2n-1, theta = n(1 + cos(pi/2n)), alpha* = 2n; any
// odd n >= 3.
BoundsReport closed_form_bounds(int n);

}  // namespace oddcycle
