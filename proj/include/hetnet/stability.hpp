#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hetnet/classify.hpp"
#include "hetnet/graph.hpp"
#include "hetnet/model.hpp"

namespace hetnet {

enum class Lemma { L41, L42, L43, L44, L45 };
const char* lemma_name(Lemma l);

struct Ingredient {
  std::string name;    // c, e, t, c_tilde_1, a_1, ...
  std::string symbol;  // e.g. max(λ_{31},λ_{32})
  double value = 0.0;
};

struct RhoEstimate {
  int equilibrium = 0;
  double value = 1.0;
  Lemma lemma = Lemma::L41;
  std::vector<Ingredient> ingredients;
  std::string formula;            // in λ_{jk} notation
  bool missing_ingredient = false;  // L43 with every contracting direction f-long
};

// Eigen-direction roles at one node, derived from the graph in AC mode or
// copied from the annotations in EXTENDED mode.
struct LocalRoles {
  std::vector<int> radial;
  std::vector<int> contracting;
  std::vector<int> expanding;
  std::vector<int> transverse;
  bool m_point = false;
  std::vector<int> f_long;
  std::vector<int> s_long;
  std::vector<DeltaClique> as_m;  // AC only: cliques with this node as m-point
};

LocalRoles local_roles(const Network& net, const std::vector<DeltaClique>& cliques, int j);

// "λ_{jk}" for single-digit indices, "λ_{j,k}" otherwise.
std::string lambda_symbol(int j, int k);

// Cliques relevant for exponent computation: detected in AC mode, none in EXTENDED mode.
std::vector<DeltaClique> analysis_cliques(const Network& net);

RhoEstimate compute_rho(const Network& net, const std::vector<DeltaClique>& cliques, int j);
RhoEstimate compute_rho_star(const Network& net, const std::vector<DeltaClique>& cliques, int j,
                             const Connection& in_edge, const Connection& out_edge);

std::vector<RhoEstimate> rho_table(const Network& net);

// Elementary cycles as equilibrium ids, smallest id first, sorted.
std::vector<std::vector<int>> enumerate_cycles(const Network& net);

enum class Theorem { THAS, THAS2, LV_AUX };
enum class Result { STABLE, INCONCLUSIVE };
const char* theorem_name(Theorem t);
const char* result_name(Result r);

struct Factor {
  std::string label;  // rho_j or q_{ijk}
  double value = 1.0;
};

struct Witness {
  std::vector<int> nodes;  // open sequence; the walk returns to nodes.front()
  std::vector<Factor> factors;
  double product = 1.0;
  double log_product = 0.0;
  bool marginal = false;
};

struct StabilityVerdict {
  Theorem theorem = Theorem::THAS;
  Result result = Result::STABLE;
  std::vector<Witness> witnesses;
  double tolerance = 1e-9;
  bool witnesses_truncated = false;
  std::string note;
};

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kMarginalBand = 1e-9;
inline constexpr std::size_t kThasEnumerationNodes = 20;
inline constexpr std::size_t kThas2EnumerationVertices = 40;

StabilityVerdict check_thas(const Network& net, double tol = kDefaultTol, std::size_t max_witnesses = 50);
StabilityVerdict check_thas2(const Network& net, double tol = kDefaultTol, std::size_t max_witnesses = 50);
StabilityVerdict check_lv_aux(const Network& net, double tol = kDefaultTol);

// Graph-level building blocks of the two theorem checks.
// Node-weighted: arc u->v carries log rho[v].
WeightedDigraph node_weighted_graph(const Digraph& g, const std::vector<double>& rho);
// Triplet graph: one vertex per arc of g (in the order of `arcs`), an arc
// between consecutive arcs (u->v, v->w) weighted log rho_star(u, v, w).
struct TripletGraph {
  std::vector<std::pair<int, int>> arcs;
  WeightedDigraph graph;
};
TripletGraph triplet_graph(const Digraph& g, const std::function<double(int, int, int)>& rho_star);
// True iff every cycle has weight > log(1 + tol), i.e. every product exceeds 1 + tol.
bool all_cycles_exceed(const WeightedDigraph& g, double tol);

// Closed walks that are multiset sums of distinct simple cycles of the
// triplet graph, connected, visiting `anchor` at most once; each is written
// as its lexicographically smallest Eulerian circuit (starting at the anchor
// when present, otherwise at the smallest id).
std::vector<std::vector<int>> list_semilinear_walks(const Network& net, int anchor, std::size_t cap = 1000);

// Per-node factors q_{ijk} along a closed walk given as an open node sequence.
Witness walk_exponent(const Network& net, const std::vector<DeltaClique>& cliques, const std::vector<int>& walk);

// The THAS condition in ρ notation, e.g. "rho_1*rho_2*min(rho_3,rho_4) > 1".
std::string render_condition(const Network& net, const std::vector<RhoEstimate>& table);

}  // namespace hetnet
