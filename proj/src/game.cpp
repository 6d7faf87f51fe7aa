#include "oddcycle/game.hpp"

#include <bit>
#include <numeric>
#include <string>

namespace oddcycle {

void validate_game_size(int n) {
  if (n < 3 || n % 2 == 0)
    throw ValidationError("game size must be odd and >= 3, got " + std::to_string(n));
}

namespace {

void validate_vertex(int v, int n) {
  if (v < 0 || v >= n)
    throw ValidationError("vertex " + std::to_string(v) + " out of range for n=" +
                          std::to_string(n));
}

}  // namespace

Query same_query(int j, int n) {
  validate_game_size(n);
  validate_vertex(j, n);
  return Query{j, j, QueryKind::Same};
}

Query adjacent_query(int j, int n) {
  validate_game_size(n);
  validate_vertex(j, n);
  return Query{j, (j + 1) % n, QueryKind::Adjacent};
}

int canonical_query_index(const Query& q) {
  return 2 * q.s + (q.kind == QueryKind::Adjacent ? 1 : 0);
}

std::vector<Query> enumerate_queries(int n) {
  validate_game_size(n);
  std::vector<Query> queries;
  queries.reserve(2 * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    queries.push_back(same_query(j, n));
    queries.push_back(adjacent_query(j, n));
  }
  return queries;
}

bool wins(const Query& q, int a, int b) {
  if ((a & ~1) != 0 || (b & ~1) != 0)
    throw ValidationError("answers must be bits");
  return q.kind == QueryKind::Same ? a == b : a != b;
}

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) throw ValidationError("zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  long long g = std::gcd(numerator < 0 ? -numerator : numerator, denominator);
  if (g == 0) g = 1;
  num = numerator / g;
  den = denominator / g;
}

ClassicalStrategy parity_strategy(int n) {
  validate_game_size(n);
  ClassicalStrategy s;
  s.color_a.resize(n);
  s.color_b.resize(n);
  for (int v = 0; v < n; ++v) {
    s.color_a[v] = static_cast<std::uint8_t>(v % 2);
    s.color_b[v] = static_cast<std::uint8_t>(v % 2);
  }
  return s;
}

WinProbability strategy_win_probability(const ClassicalStrategy& strategy, int n) {
  validate_game_size(n);
  if (strategy.color_a.size() != static_cast<std::size_t>(n) ||
      strategy.color_b.size() != static_cast<std::size_t>(n))
    throw ValidationError("coloring length does not match game size");
  WinProbability p;
  p.total = 2 * static_cast<std::uint64_t>(n);
  for (const Query& q : enumerate_queries(n))
    if (wins(q, strategy.color_a[q.s], strategy.color_b[q.t])) ++p.wins;
  return p;
}

namespace {

// Lexicographic encoding: bit (n-1-v) of the integer is vertex v's color, so
// ascending integers enumerate colorings in lexicographic order. The machine
// mask (bit v = color v) is its bit reversal.
std::vector<std::uint32_t> lex_to_mask_table(int n) {
  std::vector<std::uint32_t> table(std::size_t{1} << n);
  for (std::uint32_t lex = 0; lex < table.size(); ++lex) {
    std::uint32_t mask = 0;
    for (int v = 0; v < n; ++v)
      if (lex >> (n - 1 - v) & 1u) mask |= 1u << v;
    table[lex] = mask;
  }
  return table;
}

std::vector<std::uint8_t> mask_to_coloring(std::uint32_t mask, int n) {
  std::vector<std::uint8_t> c(n);
  for (int v = 0; v < n; ++v) c[v] = static_cast<std::uint8_t>(mask >> v & 1u);
  return c;
}

}  // namespace

BruteForceResult brute_force_optimum(int n) {
  validate_game_size(n);
  if (n > kBruteForceCap)
    throw ValidationError("brute force capped at n=" + std::to_string(kBruteForceCap) +
                          ", got " + std::to_string(n));

  const std::uint32_t limit = 1u << n;
  const std::uint32_t full = limit - 1;
  const auto rev = lex_to_mask_table(n);

  int best = -1;
  std::uint32_t best_a = 0, best_b = 0;
  for (std::uint32_t la = 0; la < limit; ++la) {
    std::uint32_t a = rev[la];
    for (std::uint32_t lb = 0; lb < limit; ++lb) {
      std::uint32_t b = rev[lb];
      // Bit j of rot is Bob's color of vertex (j+1) mod n.
      std::uint32_t rot = ((b >> 1) | (b << (n - 1))) & full;
      int w = std::popcount(~(a ^ b) & full) + std::popcount((a ^ rot) & full);
      if (w > best) {
        best = w;
        best_a = a;
        best_b = b;
      }
    }
  }

  BruteForceResult r;
  r.best.wins = static_cast<std::uint64_t>(best);
  r.best.total = 2 * static_cast<std::uint64_t>(n);
  r.strategy.color_a = mask_to_coloring(best_a, n);
  r.strategy.color_b = mask_to_coloring(best_b, n);
  return r;
}

double omega_c(int n) {
  validate_game_size(n);
  return 1.0 - 1.0 / (2.0 * static_cast<double>(n));
}

}  // namespace oddcycle
