#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "hetnet/classify.hpp"
#include "hetnet/graph.hpp"
#include "support.hpp"

using namespace hetnet;
using testing_support::load;

namespace {

std::vector<std::array<int, 3>> triples(const std::vector<DeltaClique>& qs) {
  std::vector<std::array<int, 3>> out;
  for (const auto& q : qs) out.push_back({q.b, q.m, q.e});
  return out;
}

std::set<std::string> kinds(const AcReport& r) {
  std::set<std::string> k;
  for (const auto& v : r.violations) k.insert(v.kind);
  return k;
}

}  // namespace

TEST_CASE("clique detection on the worked examples") {
  using T = std::vector<std::array<int, 3>>;
  CHECK(triples(find_delta_cliques(load("ex51.json"))) == T{{1, 2, 3}});
  CHECK(triples(find_delta_cliques(load("ex52.json"))) == T{{1, 2, 3}, {2, 5, 3}, {5, 1, 3}});
  auto q = find_delta_cliques(load("ex51.json")).front();
  CHECK(q.short_conn.from == 1);
  CHECK(q.short_conn.to == 3);
  CHECK(q.f_long.to == 2);
  CHECK(q.s_long.from == 2);
}

TEST_CASE("incomplete clique is reported") {
  Network net = load("kirk_silber_incomplete.json");
  try {
    find_delta_cliques(net);
    FAIL("expected IncompleteClique");
  } catch (const Error& e) {
    CHECK(e.code() == "IncompleteClique");
  }
  CHECK(kinds(check_ac(net)).count("incomplete-clique") == 1);
}

TEST_CASE("ac check passes on the axial fixtures") {
  for (const char* f : {"ex51.json", "ex52.json", "ex55_y5.json", "ex55_y6.json", "kirk_silber.json"}) {
    CAPTURE(f);
    AcReport r = check_ac(load(f));
    CHECK(r.pass());
  }
}

TEST_CASE("unclean fixture collects every violation") {
  auto k = kinds(check_ac(load("broken/unclean.json")));
  CHECK(k.count("unclean") == 1);
  CHECK(k.count("transverse-positive") == 1);
  CHECK(k.count("expanding-count") == 1);
}

TEST_CASE("role-annotated networks are not ac") {
  CHECK(kinds(check_ac(load("ex53.json"))).count("not-ac-mode") == 1);
}

TEST_CASE("f-long-free cycles") {
  using C = std::vector<std::vector<int>>;
  CHECK(find_flong_free_cycles(load("ex51.json")) == C{{1, 3, 4}});
  CHECK(find_flong_free_cycles(load("ex55_y5.json")) == C{{1, 2, 3, 4, 5}});
  CHECK(find_flong_free_cycles(load("ex55_y6.json")) == C{{1, 2, 3}, {4, 5, 6}});
}

TEST_CASE("Y5 decomposes as case I with J = 5") {
  auto d = decompose_structure(load("ex55_y5.json"));
  CHECK(d.kase == StructureCase::I);
  CHECK(d.J == 5);
  CHECK(d.base_cycle == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(d.optional_connections.size() == 5);
  for (const auto& o : d.optional_connections) CHECK(o.to == (o.from + 2) % 5 + 1);
}

TEST_CASE("ladder with J = 3 reports two base cycles") {
  auto ds = decompose_all(load("ex55_y6.json"));
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].primary);
  CHECK_FALSE(ds[1].primary);
  CHECK(ds[0].base_cycle == std::vector<int>{1, 2, 3});
  CHECK(ds[0].groups == std::vector<std::vector<int>>{{1, 4}, {2, 5}, {3, 6}});
  CHECK(ds[1].base_cycle == std::vector<int>{4, 5, 6});
  CHECK(ds[1].groups == std::vector<std::vector<int>>{{4, 2}, {5, 3}, {6, 1}});
}

TEST_CASE("completed Kirk-Silber network groups xi_2 with xi_4") {
  auto d = decompose_structure(load("kirk_silber.json"));
  CHECK(d.kase == StructureCase::II);
  CHECK(d.J == 3);
  CHECK(d.groups == std::vector<std::vector<int>>{{2, 4}, {3}, {1}});
  REQUIRE(d.optional_connections.size() == 1);
  CHECK(d.optional_connections[0].from == 4);
  CHECK(d.optional_connections[0].to == 1);
  CHECK(d.optional_connections[0].pattern == "[xi_{j,m_j}->xi_{j+2,0}] j=1");
}

TEST_CASE("decomposition regenerates the edge set") {
  for (const char* f : {"ex51.json", "ex52.json", "ex55_y5.json", "ex55_y6.json", "kirk_silber.json"}) {
    CAPTURE(f);
    Network net = load(f);
    std::vector<std::pair<int, int>> edges;
    for (const auto& c : net.connections) edges.push_back({c.from, c.to});
    std::sort(edges.begin(), edges.end());
    for (const auto& d : decompose_all(net)) CHECK(expand_structure(d) == edges);
  }
}

TEST_CASE("cycle enumeration agrees with brute-force DFS on random digraphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    Digraph g(n);
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng() % 3 == 0) {
          g.add_arc(u, v);
          adj[u].push_back(v);
        }
    std::vector<std::vector<int>> oracle;
    testing_support::brute_force_cycles(adj, [&](const std::vector<int>& c) { oracle.push_back(c); });
    std::sort(oracle.begin(), oracle.end());
    CHECK(elementary_cycles(g) == oracle);
  }
}
