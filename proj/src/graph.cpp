#include "oddcycle/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "oddcycle/errors.hpp"
#include "oddcycle/game.hpp"
#include "oddcycle/lp.hpp"
#include "oddcycle/spectrum.hpp"

namespace oddcycle {

namespace {

constexpr double kSpectrumTol = 1e-9;

std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

Graph::Graph(int order) : order_(order) {
  if (order < 1 || order > 64)
    throw ValidationError("graph order must be in [1, 64]");
  adj_.assign(order, 0);
}

std::size_t Graph::size() const {
  std::size_t twice = 0;
  for (auto row : adj_) twice += std::popcount(row);
  return twice / 2;
}

void Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= order_ || v >= order_)
    throw ValidationError("edge endpoint out of range");
  if (u == v) throw ValidationError("self loops are not allowed");
  adj_[u] |= bit(v);
  adj_[v] |= bit(u);
}

bool Graph::has_edge(int u, int v) const { return (adj_[u] >> v) & 1; }

int Graph::degree(int v) const { return std::popcount(adj_[v]); }

bool Graph::regular(int k) const {
  for (int v = 0; v < order_; ++v)
    if (degree(v) != k) return false;
  return true;
}

std::vector<std::pair<int, int>> to_edge_list(const Graph& g) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.order(); ++u)
    for (int v = u + 1; v < g.order(); ++v)
      if (g.has_edge(u, v)) edges.emplace_back(u, v);
  return edges;
}

// -------------------------------------------------------------- circulants --

namespace {

void validate_circulant(const Circulant& c) {
  if (c.order < 3 || c.order > 64)
    throw ValidationError("circulant order must be in [3, 64]");
  for (int d : c.connections)
    if (d < 1 || 2 * d > c.order)
      throw ValidationError("connection distance out of range [1, order/2]");
}

}  // namespace

Graph circulant_graph(const Circulant& c) {
  validate_circulant(c);
  Graph g(c.order);
  for (int v = 0; v < c.order; ++v)
    for (int d : c.connections) g.add_edge(v, (v + d) % c.order);
  return g;
}

Circulant mobius_ladder(int order) {
  if (order < 6 || order % 2 != 0)
    throw ValidationError("mobius ladder order must be even and >= 6");
  return Circulant{order, {1, order / 2}};
}

std::vector<double> circulant_spectrum(const Circulant& c) {
  validate_circulant(c);
  std::vector<double> eig(c.order);
  for (int k = 0; k < c.order; ++k) {
    double lambda = 0.0;
    for (int d : c.connections) {
      if (2 * d == c.order)
        lambda += std::cos(std::numbers::pi * k);
      else
        lambda += 2.0 * std::cos(2.0 * std::numbers::pi * k * d / c.order);
    }
    eig[k] = lambda;
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> adjacency_spectrum(const Graph& g) {
  int n = g.order();
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g.has_edge(u, v)) a[static_cast<std::size_t>(u) * n + v] = 1.0;
  return symmetric_eigenvalues(std::move(a), n);
}

// ------------------------------------------------------- exclusivity graph --

ExclusivityGraph exclusivity_graph(int n) {
  validate_game_size(n);
  if (4 * n > 64)
    throw ValidationError("exclusivity graph exceeds the 64-vertex solver cap");
  std::vector<Event> events;
  events.reserve(4 * n);
  for (int j = 0; j < n; ++j) {
    int next = (j + 1) % n;
    events.push_back({0, 0, j, j});
    events.push_back({1, 1, j, j});
    events.push_back({0, 1, j, next});
    events.push_back({1, 0, j, next});
  }
  Graph g(4 * n);
  for (int u = 0; u < 4 * n; ++u)
    for (int v = u + 1; v < 4 * n; ++v) {
      const Event& e = events[u];
      const Event& f = events[v];
      bool exclusive = (e.x == f.x && e.a != f.a) || (e.y == f.y && e.b != f.b);
      if (exclusive) g.add_edge(u, v);
    }
  return {std::move(g), std::move(events)};
}

// ------------------------------------------------------------ isomorphism --

namespace {

// Connected expansion order: each vertex after the first in its component is
// adjacent to an earlier one, which keeps the backtracking tight.
std::vector<int> bfs_order(const Graph& g) {
  std::vector<int> order;
  std::vector<bool> seen(g.order(), false);
  for (int s = 0; s < g.order(); ++s) {
    if (seen[s]) continue;
    std::vector<int> queue{s};
    seen[s] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      order.push_back(u);
      for (int v = 0; v < g.order(); ++v)
        if (g.has_edge(u, v) && !seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
    }
  }
  return order;
}

bool extend_mapping(const Graph& g, const Graph& h, const std::vector<int>& order,
                    std::size_t depth, std::vector<int>& mapping,
                    std::vector<bool>& used) {
  if (depth == order.size()) return true;
  int u = order[depth];
  for (int cand = 0; cand < h.order(); ++cand) {
    if (used[cand] || h.degree(cand) != g.degree(u)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < depth; ++i) {
      int w = order[i];
      if (g.has_edge(u, w) != h.has_edge(cand, mapping[w])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    mapping[u] = cand;
    used[cand] = true;
    if (extend_mapping(g, h, order, depth + 1, mapping, used)) return true;
    used[cand] = false;
    mapping[u] = -1;
  }
  return false;
}

}  // namespace

IsomorphismResult verify_isomorphic(const Graph& g, const Graph& h) {
  if (g.order() != h.order())
    return {false, {}, "order mismatch (" + std::to_string(g.order()) + " vs " +
                           std::to_string(h.order()) + ")"};
  if (g.size() != h.size())
    return {false, {}, "edge count mismatch (" + std::to_string(g.size()) +
                           " vs " + std::to_string(h.size()) + ")"};

  std::vector<int> dg, dh;
  for (int v = 0; v < g.order(); ++v) {
    dg.push_back(g.degree(v));
    dh.push_back(h.degree(v));
  }
  std::sort(dg.begin(), dg.end());
  std::sort(dh.begin(), dh.end());
  if (dg != dh) return {false, {}, "degree multiset mismatch"};

  auto sg = adjacency_spectrum(g);
  auto sh = adjacency_spectrum(h);
  for (std::size_t k = 0; k < sg.size(); ++k)
    if (std::fabs(sg[k] - sh[k]) > kSpectrumTol)
      return {false, {},
              "spectrum mismatch at index " + std::to_string(k) + " (" +
                  fmt_double(sg[k]) + " vs " + fmt_double(sh[k]) + ")"};

  std::vector<int> mapping(g.order(), -1);
  std::vector<bool> used(h.order(), false);
  auto order = bfs_order(g);
  if (!extend_mapping(g, h, order, 0, mapping, used))
    return {false, {}, "no edge-preserving bijection found"};

  // Witness validation: the returned mapping is rechecked pair by pair.
  std::vector<bool> hit(h.order(), false);
  for (int v = 0; v < g.order(); ++v) {
    if (mapping[v] < 0 || mapping[v] >= h.order() || hit[mapping[v]])
      return {false, {}, "internal error: mapping is not a bijection"};
    hit[mapping[v]] = true;
  }
  for (int u = 0; u < g.order(); ++u)
    for (int v = u + 1; v < g.order(); ++v)
      if (g.has_edge(u, v) != h.has_edge(mapping[u], mapping[v]))
        return {false, {}, "internal error: mapping does not preserve edges"};

  return {true, std::move(mapping), ""};
}

IsomorphismResult verify_is_mobius(const Graph& g) {
  if (g.order() % 2 != 0 || g.order() < 6)
    return {false, {}, "order " + std::to_string(g.order()) +
                           " cannot be a mobius ladder"};
  Graph ladder = circulant_graph(mobius_ladder(g.order()));
  if (!g.regular(3)) return {false, {}, "graph is not 3-regular"};
  return verify_isomorphic(g, ladder);
}

// --------------------------------------------------------- independence --

namespace {

struct MisSearch {
  const Graph* g;
  int best = 0;
  std::uint64_t best_set = 0;

  // Each greedily grown clique contributes at most one vertex.
  int clique_cover_bound(std::uint64_t cand) const {
    int classes = 0;
    std::uint64_t left = cand;
    while (left) {
      int v = std::countr_zero(left);
      std::uint64_t clique = bit(v);
      std::uint64_t pool = left & g->neighbors(v);
      while (pool) {
        int u = std::countr_zero(pool);
        pool &= ~bit(u);
        bool mutual = true;
        std::uint64_t members = clique;
        while (members) {
          int w = std::countr_zero(members);
          members &= ~bit(w);
          if (!g->has_edge(u, w)) {
            mutual = false;
            break;
          }
        }
        if (mutual) {
          clique |= bit(u);
          pool &= g->neighbors(u);
        }
      }
      left &= ~clique;
      ++classes;
    }
    return classes;
  }

  void expand(std::uint64_t cand, int size, std::uint64_t chosen) {
    if (cand == 0) {
      if (size > best) {
        best = size;
        best_set = chosen;
      }
      return;
    }
    if (size + clique_cover_bound(cand) <= best) return;

    // Pivot on the candidate with the most candidate-neighbors.
    int pivot = -1, pivot_deg = -1;
    std::uint64_t scan = cand;
    while (scan) {
      int v = std::countr_zero(scan);
      scan &= ~bit(v);
      int d = std::popcount(g->neighbors(v) & cand);
      if (d > pivot_deg) {
        pivot_deg = d;
        pivot = v;
      }
    }
    expand(cand & ~g->neighbors(pivot) & ~bit(pivot), size + 1,
           chosen | bit(pivot));
    expand(cand & ~bit(pivot), size, chosen);
  }
};

}  // namespace

IndependentSet independence_number(const Graph& g) {
  MisSearch search{&g, 0, 0};
  std::uint64_t all = g.order() == 64 ? ~std::uint64_t{0}
                                      : (bit(g.order()) - 1);
  search.expand(all, 0, 0);
  IndependentSet result;
  result.size = search.best;
  for (int v = 0; v < g.order(); ++v)
    if ((search.best_set >> v) & 1) result.vertices.push_back(v);
  return result;
}

// ------------------------------------------------------ fractional packing --

PackingResult fractional_packing(const Graph& g) {
  for (int u = 0; u < g.order(); ++u)
    for (int v = u + 1; v < g.order(); ++v) {
      if (!g.has_edge(u, v)) continue;
      std::uint64_t common = g.neighbors(u) & g.neighbors(v);
      if (common) {
        int w = std::countr_zero(common);
        throw ValidationError(
            "edge-constraint relaxation needs a triangle-free graph; found "
            "triangle {" +
            std::to_string(u) + ", " + std::to_string(v) + ", " +
            std::to_string(w) + "}");
      }
    }

  LinearProgram lp;
  lp.num_vars = g.order();
  lp.objective.assign(g.order(), 1.0);
  for (int v = 0; v < g.order(); ++v) {
    LpRow row;
    row.coeffs.assign(g.order(), 0.0);
    row.coeffs[v] = 1.0;
    row.sense = RowSense::LessEq;
    row.rhs = 1.0;
    lp.rows.push_back(std::move(row));
  }
  for (auto [u, v] : to_edge_list(g)) {
    LpRow row;
    row.coeffs.assign(g.order(), 0.0);
    row.coeffs[u] = 1.0;
    row.coeffs[v] = 1.0;
    row.sense = RowSense::LessEq;
    row.rhs = 1.0;
    lp.rows.push_back(std::move(row));
  }
  LpResult r = solve(lp);
  if (r.status != LpStatus::Optimal)
    throw ValidationError("packing relaxation failed to solve");
  return {r.value, std::move(r.x)};
}

// ------------------------------------------------------------ lovasz theta --

double lovasz_theta_circulant(const Circulant& c) {
  validate_circulant(c);
  int n = c.order;
  std::vector<bool> is_edge(n / 2 + 1, false);
  for (int d : c.connections) is_edge[d] = true;

  std::vector<int> free_dist;  // non-edge distances
  for (int d = 1; 2 * d <= n; ++d)
    if (!is_edge[d]) free_dist.push_back(d);

  auto mult = [&](int d) { return 2 * d == n ? 1.0 : 2.0; };

  // Feasible matrices are circulant B = circ(c_0, ..), c_0 = 1/n, c_d free on
  // non-edge distances, zero on edges. Maximize the all-ones sum subject to
  // the DFT eigenvalues of B staying nonnegative. Free c_d splits as u - v.
  int k_vars = static_cast<int>(free_dist.size());
  LinearProgram lp;
  lp.num_vars = 2 * k_vars;
  lp.objective.resize(2 * k_vars);
  for (int i = 0; i < k_vars; ++i) {
    double w = c.order * mult(free_dist[i]);
    lp.objective[2 * i] = w;
    lp.objective[2 * i + 1] = -w;
  }
  for (int k = 0; k <= n / 2; ++k) {
    LpRow row;
    row.coeffs.assign(2 * k_vars, 0.0);
    for (int i = 0; i < k_vars; ++i) {
      int d = free_dist[i];
      double coeff = mult(d) * std::cos(2.0 * std::numbers::pi * k * d / n);
      row.coeffs[2 * i] = coeff;
      row.coeffs[2 * i + 1] = -coeff;
    }
    row.sense = RowSense::GreaterEq;
    row.rhs = -1.0 / n;
    lp.rows.push_back(std::move(row));
  }

  LpResult r = solve(lp);
  if (r.status != LpStatus::Optimal)
    throw ValidationError("lovasz theta program failed to solve");
  return 1.0 + r.value;
}

}  // namespace oddcycle
