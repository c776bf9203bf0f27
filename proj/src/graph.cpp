#include "hetnet/graph.hpp"

#include <algorithm>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/hawick_circuits.hpp>
#include <limits>

#include "hetnet/model.hpp"

namespace hetnet {

namespace {

struct CapReached {};

struct Collector {
  std::vector<std::vector<int>>* out;
  std::size_t cap;

  template <typename Path, typename Graph>
  void cycle(const Path& p, const Graph&) {
    if (out->size() >= cap) throw CapReached{};
    std::vector<int> c(p.begin(), p.end());
    auto it = std::min_element(c.begin(), c.end());
    std::rotate(c.begin(), it, c.end());
    out->push_back(std::move(c));
  }
};

}  // namespace

std::vector<std::vector<int>> elementary_cycles(const Digraph& g, std::size_t cap) {
  using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  BG bg(g.n);
  for (int u = 0; u < g.n; ++u) {
    std::vector<int> succ = g.adj[u];
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    for (int v : succ) boost::add_edge(u, v, bg);
  }
  std::vector<std::vector<int>> out;
  try {
    boost::hawick_unique_circuits(bg, Collector{&out, cap});
  } catch (const CapReached&) {
    throw Error("CapExceeded", "more than " + std::to_string(cap) + " elementary cycles; enumeration aborted");
  }
  std::sort(out.begin(), out.end());
  return out;
}

LowCycle detect_low_cycle(const WeightedDigraph& g, double threshold) {
  const int n = g.n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
  std::vector<int> next(static_cast<std::size_t>(n) * n, -1);
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  for (const auto& a : g.arcs) {
    if (a.w < d[at(a.u, a.v)]) {
      d[at(a.u, a.v)] = a.w;
      next[at(a.u, a.v)] = a.v;
    }
  }
  // The diagonal starts at +inf so d[i][i] ends as the lightest closed walk through i.
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const double dik = d[at(i, k)];
      if (dik == inf) continue;
      for (int j = 0; j < n; ++j) {
        const double cand = dik + d[at(k, j)];
        if (cand < d[at(i, j)]) {
          d[at(i, j)] = cand;
          next[at(i, j)] = next[at(i, k)];
        }
      }
    }
  }
  LowCycle r;
  r.min_weight = inf;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    if (d[at(i, i)] < r.min_weight) {
      r.min_weight = d[at(i, i)];
      best = i;
    }
  }
  r.negative = r.min_weight < 0.0;
  r.found = best >= 0 && r.min_weight <= threshold;
  if (r.found) {
    // Follow next-pointers from best back to itself; cut at the first repeat.
    std::vector<int> walk{best};
    std::vector<char> on(n, 0);
    on[best] = 1;
    int cur = best;
    for (int guard = 0; guard <= n; ++guard) {
      int nx = next[at(cur, best)];
      if (nx < 0) break;
      if (nx == best) {
        r.witness = walk;
        break;
      }
      if (on[nx]) {
        auto it = std::find(walk.begin(), walk.end(), nx);
        r.witness.assign(it, walk.end());
        break;
      }
      on[nx] = 1;
      walk.push_back(nx);
      cur = nx;
    }
  }
  return r;
}

}  // namespace hetnet
