#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hetnet/model.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(HETNET_FIXTURES) + "/" + name; }

inline hetnet::Network load(const std::string& name) { return hetnet::load_network(fixture(name)); }

inline nlohmann::json load_json(const std::string& name) {
  std::ifstream in(fixture(name));
  return nlohmann::json::parse(in);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Same sign pattern, magnitudes drawn from [lo, hi].
inline nlohmann::json randomize_magnitudes(nlohmann::json doc, std::mt19937_64& rng, double lo = 0.5,
                                           double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (auto& [id, row] : doc["eigenvalues"].items())
    for (auto& v : row) v = (v.get<double>() < 0 ? -1.0 : 1.0) * u(rng);
  return doc;
}

// Independent oracle: plain DFS over paths whose vertices all exceed the
// start vertex. Calls `visit` once per elementary cycle (start vertex first).
inline void brute_force_cycles(const std::vector<std::vector<int>>& adj,
                               const std::function<void(const std::vector<int>&)>& visit) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> path;
  std::vector<bool> on(n, false);
  std::function<void(int, int)> dfs = [&](int s, int v) {
    for (int w : adj[v]) {
      if (w == s) visit(path);
      else if (w > s && !on[w]) {
        on[w] = true;
        path.push_back(w);
        dfs(s, w);
        path.pop_back();
        on[w] = false;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    on[s] = true;
    dfs(s, s);
    on[s] = false;
  }
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing_support
