#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ex52_table.hpp"
#include "hetnet/report.hpp"
#include "hetnet/stability.hpp"
#include "support.hpp"

using namespace hetnet;
using testing_support::load;
using testing_support::load_json;

namespace {

std::vector<std::vector<int>> adjacency(const WeightedDigraph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& a : g.arcs) adj[a.u].push_back(a.v);
  return adj;
}

// Oracle for all_cycles_exceed: every elementary cycle product > 1 + tol.
bool brute_all_exceed(const WeightedDigraph& g, double tol) {
  std::map<std::pair<int, int>, double> w;
  for (const auto& a : g.arcs) w[{a.u, a.v}] = a.w;
  bool ok = true;
  testing_support::brute_force_cycles(adjacency(g), [&](const std::vector<int>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += w[{c[i], c[(i + 1) % c.size()]}];
    if (!(std::exp(s) > 1 + tol)) ok = false;
  });
  return ok;
}

}  // namespace

TEST_CASE("ex51 exponents and formulas") {
  auto t = rho_table(load("ex51.json"));
  REQUIRE(t.size() == 4);
  CHECK(t[0].formula == "-λ_{14}/max(λ_{12},λ_{13})");
  CHECK(t[1].formula == "1");
  CHECK(t[2].formula == "-max(λ_{31},λ_{32})/λ_{34}");
  CHECK(t[3].formula == "min(-λ_{43}/λ_{41}, 1-λ_{42}/λ_{41})");
  CHECK(t[0].value == doctest::Approx(3.0));
  CHECK(t[1].value == 1.0);
  CHECK(t[2].value == doctest::Approx(2.0));
  CHECK(t[3].value == doctest::Approx(2.0));
  CHECK(t[1].lemma == Lemma::L42);
}

TEST_CASE("condition snapshots") {
  for (const char* e : {"ex51", "ex53", "ex54"}) {
    CAPTURE(e);
    Network net = load(std::string(e) + ".json");
    const std::string expected = testing_support::read_text(testing_support::fixture("expected/" + std::string(e) +
                                                                                      ".condition.txt"));
    CHECK(condition_block(net, rho_table(net)) == expected);
  }
}

TEST_CASE("ex54 m-points use the unit cap") {
  auto t = rho_table(load("ex54.json"));
  CHECK(t[2].lemma == Lemma::L43);
  CHECK(t[3].lemma == Lemma::L43);
  CHECK(t[4].formula == "λ_{52}/(λ_{52}-λ_{51})");
}

TEST_CASE("cycle counts") {
  CHECK(enumerate_cycles(load("ex51.json")) == std::vector<std::vector<int>>{{1, 2, 3, 4}, {1, 3, 4}});
  CHECK(enumerate_cycles(load("ex54.json")).size() == 5);
}

TEST_CASE("verdicts on the worked examples") {
  CHECK(check_thas(load("ex51.json")).result == Result::STABLE);
  CHECK(check_thas2(load("ex51.json")).result == Result::STABLE);
  auto v = check_thas(load("ex51_violating.json"));
  CHECK(v.result == Result::INCONCLUSIVE);
  CHECK_FALSE(v.witnesses.empty());
  CHECK(check_thas(load("ex52.json")).result == Result::INCONCLUSIVE);
  auto w = check_thas2(load("ex55_y5.json"));
  CHECK(w.result == Result::INCONCLUSIVE);
  REQUIRE_FALSE(w.witnesses.empty());
  CHECK(w.witnesses[0].product == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.witnesses[0].marginal);
  CHECK(check_lv_aux(load("ex55_y5.json")).result == Result::STABLE);
}

TEST_CASE("ex52 walk list") {
  CHECK(list_semilinear_walks(load("ex52.json"), 4) == ex52::walks());
}

TEST_CASE("ex52 factors that follow the printed table") {
  // q_{123} is checked (and expected to differ) in the acceptance binary.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Network net = parse_network(testing_support::randomize_magnitudes(load_json("ex52.json"), rng));
    auto cliques = analysis_cliques(net);
    for (const auto& walk : ex52::walks()) {
      Witness w = walk_exponent(net, cliques, walk);
      for (const auto& f : w.factors) {
        if (f.label == "q_{123}") continue;
        CAPTURE(f.label);
        REQUIRE(ex52::q_table().count(f.label) == 1);
        CHECK(testing_support::rel_close(f.value, ex52::q_table().at(f.label)(net), 1e-12));
      }
    }
  }
}

TEST_CASE("exponents are invariant under positive rescaling of all eigenvalues") {
  for (const char* f : {"ex51.json", "ex52.json", "ex53.json", "ex54.json", "ex55_y6.json", "kirk_silber.json"}) {
    CAPTURE(f);
    auto doc = load_json(f);
    auto ref = rho_table(parse_network(doc));
    for (auto& [id, row] : doc["eigenvalues"].items())
      for (auto& v : row) v = v.get<double>() * 7.5;
    auto scaled = rho_table(parse_network(doc));
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(scaled[i].value == doctest::Approx(ref[i].value));
  }
}

TEST_CASE("path exponents never fall below the node exponent away from m-points") {
  std::mt19937_64 rng(11);
  for (const char* f : {"ex51.json", "ex52.json", "ex55_y5.json", "ex55_y6.json", "kirk_silber.json"}) {
    for (int trial = 0; trial < 10; ++trial) {
      Network net = parse_network(testing_support::randomize_magnitudes(load_json(f), rng));
      auto cliques = analysis_cliques(net);
      for (int j : net.ids()) {
        if (local_roles(net, cliques, j).m_point) continue;
        const double rho = compute_rho(net, cliques, j).value;
        for (int i : net.predecessors(j))
          for (int k : net.successors(j)) {
            CAPTURE(f);
            CAPTURE(i);
            CAPTURE(j);
            CAPTURE(k);
            const double star = compute_rho_star(net, cliques, j, *net.find(i, j), *net.find(j, k)).value;
            CHECK(star >= rho - 1e-12);
          }
      }
    }
  }
}

TEST_CASE("at an m-point the tabulated q_{512} can undercut rho_1") {
  // The walk table's own formula breaks rho* >= rho here; we follow the table.
  auto doc = load_json("ex52.json");
  doc["eigenvalues"]["1"] = {-1.0, 1.0, 0.1, -3.0, -0.2};
  Network net = parse_network(doc);
  auto cliques = analysis_cliques(net);
  const double rho1 = compute_rho(net, cliques, 1).value;
  const double q512 = compute_rho_star(net, cliques, 1, *net.find(5, 1), *net.find(1, 2)).value;
  CHECK(rho1 == doctest::Approx(0.2 / 0.3));
  CHECK(q512 == doctest::Approx(ex52::q_table().at("q_{512}")(net)));
  CHECK(q512 == doctest::Approx(0.2));
  CHECK(q512 < rho1);
}

TEST_CASE("THAS stable implies THAS2 stable") {
  std::mt19937_64 rng(5);
  int stable = 0;
  for (const char* f : {"ex51.json", "ex52.json", "kirk_silber.json"}) {
    for (int trial = 0; trial < 30; ++trial) {
      Network net = parse_network(testing_support::randomize_magnitudes(load_json(f), rng, 0.2, 5.0));
      if (check_thas(net).result == Result::STABLE) {
        ++stable;
        CHECK(check_thas2(net).result == Result::STABLE);
      }
    }
  }
  CHECK(stable > 0);
}

TEST_CASE("low-cycle detector agrees with exhaustive cycle products") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    Digraph g(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b && rng() % 3 == 0) g.add_arc(a, b);
    std::vector<double> rho(n);
    for (auto& r : rho) r = u(rng);
    auto wg = node_weighted_graph(g, rho);
    const bool fast = all_cycles_exceed(wg, 1e-9);
    CHECK(fast == brute_all_exceed(wg, 1e-9));
    (fast ? yes : no)++;
  }
  CHECK(yes > 10);
  CHECK(no > 10);
}

TEST_CASE("THAS condition string for a single cycle") {
  CHECK(render_condition(load("ex55_y5.json"), rho_table(load("ex55_y5.json"))) ==
        "rho_1*rho_2*rho_3*rho_4*rho_5 > 1");
}

TEST_CASE("lambda symbols") {
  CHECK(lambda_symbol(1, 4) == "λ_{14}");
  CHECK(lambda_symbol(12, 3) == "λ_{12,3}");
}
