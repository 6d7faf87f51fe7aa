#include "oddcycle/bounds.hpp"

#include <cmath>
#include <numbers>

#include "oddcycle/errors.hpp"
#include "oddcycle/game.hpp"
#include "oddcycle/graph.hpp"
#include "oddcycle/quantum.hpp"

namespace oddcycle {

namespace {

constexpr double kThetaTol = 1e-6;
constexpr double kAlphaStarTol = 1e-9;
constexpr int kExactCap = 13;  // 4n <= 64 keeps exact solvers in range

void fill_normalized(BoundsReport& r) {
  double denom = 2.0 * r.n;
  r.omega_c_value = r.alpha / denom;
  r.omega_q_upper = r.theta / denom;
  r.omega_ns = r.alpha_star / denom;
}

}  // namespace

BoundsReport closed_form_bounds(int n) {
  validate_game_size(n);
  BoundsReport r;
  r.n = n;
  r.alpha = 2.0 * n - 1.0;
  r.theta = n * (1.0 + std::cos(std::numbers::pi / (2.0 * n)));
  r.alpha_star = 2.0 * n;
  r.computed = false;
  fill_normalized(r);
  return r;
}

BoundsReport bounds_report(int n) {
  validate_game_size(n);
  if (n > kExactCap)
    throw ValidationError("exact bound solvers support n <= " +
                          std::to_string(kExactCap) +
                          "; use the closed forms beyond that");

  ExclusivityGraph eg = exclusivity_graph(n);

  IsomorphismResult iso = verify_is_mobius(eg.graph);
  if (!iso.isomorphic)
    throw ValidationError("exclusivity structure failed the ladder check: " +
                          iso.reason);

  IndependentSet mis = independence_number(eg.graph);
  double theta = lovasz_theta_circulant(mobius_ladder(4 * n));
  PackingResult packing = fractional_packing(eg.graph);

  if (!(mis.size <= theta + kThetaTol))
    throw ValidationError("bound sandwich violated: alpha > theta");
  if (!(theta <= packing.value + kAlphaStarTol + kThetaTol))
    throw ValidationError("bound sandwich violated: theta > alpha*");
  double game_value = 2.0 * n * omega_q(n);
  if (std::fabs(theta - game_value) > kThetaTol)
    throw ValidationError("theta does not match the quantum game value");

  BoundsReport r;
  r.n = n;
  r.alpha = mis.size;
  r.theta = theta;
  r.alpha_star = packing.value;
  r.computed = true;
  r.independent_set = std::move(mis.vertices);
  r.mobius_mapping = std::move(iso.mapping);
  fill_normalized(r);
  return r;
}

}  // namespace oddcycle
