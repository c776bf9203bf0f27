#pragma once

#include <cstddef>
#include <vector>

namespace hetnet {

// Plain digraph on vertices 0..n-1.
struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  explicit Digraph(int vertices = 0) : n(vertices), adj(vertices) {}
  void add_arc(int u, int v) { adj[u].push_back(v); }
};

inline constexpr std::size_t kCycleCap = 1'000'000;

// All elementary directed cycles, each rotated so its smallest vertex comes
// first, sorted lexicographically. Throws CapExceeded past `cap` cycles.
std::vector<std::vector<int>> elementary_cycles(const Digraph& g, std::size_t cap = kCycleCap);

struct WeightedArc {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

struct WeightedDigraph {
  int n = 0;
  std::vector<WeightedArc> arcs;
};

struct LowCycle {
  bool found = false;
  double min_weight = 0.0;  // minimum closed-walk weight (meaningful when no negative cycle)
  bool negative = false;    // a cycle of negative weight exists
  std::vector<int> witness;  // best-effort vertex cycle
};

// Decides whether some cycle has total arc weight <= threshold (threshold >= 0).
// Floyd-Warshall over closed walks: with a non-negative threshold the minimum
// closed walk is <= threshold iff some simple cycle is.
LowCycle detect_low_cycle(const WeightedDigraph& g, double threshold);

}  // namespace hetnet
