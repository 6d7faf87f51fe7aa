#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oddcycle {

// Measurement event p(a b | x y): outcomes a, b for settings x, y.
struct Event {
  int a = 0, b = 0, x = 0, y = 0;
  friend bool operator==(const Event&, const Event&) = default;
};

// Undirected graph on up to 64 vertices; row i is a neighbor bitmask.
class Graph {
 public:
  explicit Graph(int order);

  int order() const { return order_; }
  std::size_t size() const;  // edge count
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  std::uint64_t neighbors(int v) const { return adj_[v]; }
  int degree(int v) const;
  bool regular(int k) const;

 private:
  int order_;
  std::vector<std::uint64_t> adj_;
};

std::vector<std::pair<int, int>> to_edge_list(const Graph& g);

// Circulant graph C_order(connections): i ~ i +- d (mod order) for d in
// connections. Connection distances live in [1, order/2].
struct Circulant {
  int order = 0;
  std::vector<int> connections;
};

Graph circulant_graph(const Circulant& c);
Circulant mobius_ladder(int order);  // C_order(1, order/2); order even >= 6

// Adjacency eigenvalues, ascending. The circulant version is closed-form.
std::vector<double> circulant_spectrum(const Circulant& c);
std::vector<double> adjacency_spectrum(const Graph& g);

// Exclusivity structure of the 2n winning-event families: per cycle edge j
// the events (0,0|j,j), (1,1|j,j), (0,1|j,j+1), (1,0|j,j+1) at indices
// 4j..4j+3. Two events are exclusive when either side holds the same setting
// but a different outcome.
struct ExclusivityGraph {
  Graph graph;
  std::vector<Event> events;
};

ExclusivityGraph exclusivity_graph(int n);

struct IsomorphismResult {
  bool isomorphic = false;
  std::vector<int> mapping;  // mapping[v_g] = v_h when isomorphic
  std::string reason;        // failure explanation otherwise
};

// Backtracking search for an edge-preserving bijection, cheapest screens
// first (order, size, degree multiset, adjacency spectrum within 1e-9).
IsomorphismResult verify_isomorphic(const Graph& g, const Graph& h);

// Screens + explicit bijection witness against mobius_ladder(g.order()).
IsomorphismResult verify_is_mobius(const Graph& g);

struct IndependentSet {
  int size = 0;
  std::vector<int> vertices;
};

// Exact maximum independent set: branch and bound over vertex bitmasks with
// a greedy clique-cover upper bound.
IndependentSet independence_number(const Graph& g);

struct PackingResult {
  double value = 0.0;
  std::vector<double> weights;
};

// Fractional relaxation max sum(x) s.t. x_u + x_v <= 1 per edge, x >= 0.
// Valid as the fractional packing number only on triangle-free graphs;
// throws with a witness triangle otherwise.
PackingResult fractional_packing(const Graph& g);

// Lovasz number of a circulant graph via the symmetry-reduced linear
// program over circulant feasible matrices.
double lovasz_theta_circulant(const Circulant& c);

}  // namespace oddcycle
