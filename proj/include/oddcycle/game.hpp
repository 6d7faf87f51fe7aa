#pragma once

#include <cstdint>
#include <vector>

#include "oddcycle/errors.hpp"

namespace oddcycle {

// Brute force enumerates all 4^n deterministic strategy pairs; larger n is
// refused rather than silently truncated.
inline constexpr int kBruteForceCap = 9;

// Game size must be odd and at least 3; everything else is rejected here.
void validate_game_size(int n);

enum class QueryKind { Same, Adjacent };

// One referee question: both players are asked for the color of a seat.
// Same: s == t, answers must agree. Adjacent: t == (s+1) mod n, answers must
// differ.
struct Query {
  int s = 0;
  int t = 0;
  QueryKind kind = QueryKind::Same;
  friend bool operator==(const Query&, const Query&) = default;
};

Query same_query(int j, int n);
Query adjacent_query(int j, int n);

// Position of q in the canonical enumeration order: ascending j, the Same
// query before the Adjacent one. Index 2j and 2j+1.
int canonical_query_index(const Query& q);

// All 2n queries in canonical order.
std::vector<Query> enumerate_queries(int n);

// Win predicate on the players' answer bits.
bool wins(const Query& q, int a, int b);

// Exact fraction, normalized with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;
  Rational() = default;
  Rational(long long numerator, long long denominator);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Win probability under the uniform query distribution, kept exact as
// wins-over-total. The denominator of the reduced fraction divides 2n.
struct WinProbability {
  std::uint64_t wins = 0;
  std::uint64_t total = 0;
  Rational exact() const {
    return Rational(static_cast<long long>(wins), static_cast<long long>(total));
  }
  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(wins) / static_cast<double>(total);
  }
};

// Deterministic colorings for both players; color_a[v], color_b[v] in {0,1}.
struct ClassicalStrategy {
  std::vector<std::uint8_t> color_a;
  std::vector<std::uint8_t> color_b;
};

// Alternating coloring color[v] = v mod 2 for both players. Optimal: it loses
// only the wrap-around adjacent query (n-1, 0).
ClassicalStrategy parity_strategy(int n);

// Exact win probability of a strategy pair over the 2n uniform queries.
WinProbability strategy_win_probability(const ClassicalStrategy& strategy, int n);

struct BruteForceResult {
  WinProbability best;
  ClassicalStrategy strategy;
};

// Exact classical optimum by exhausting all 4^n deterministic strategy pairs.
// Ties break toward the lexicographically smallest (color_a, color_b) bit
// strings, vertex 0 first.
BruteForceResult brute_force_optimum(int n);

// Classical bound 1 - 1/(2n).
double omega_c(int n);

}  // namespace oddcycle
