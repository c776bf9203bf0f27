#include "hetnet/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace hetnet {

const char* lemma_name(Lemma l) {
  switch (l) {
    case Lemma::L41: return "L41";
    case Lemma::L42: return "L42";
    case Lemma::L43: return "L43";
    case Lemma::L44: return "L44";
    case Lemma::L45: return "L45";
  }
  return "?";
}

const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::THAS: return "THAS";
    case Theorem::THAS2: return "THAS2";
    case Theorem::LV_AUX: return "LV_AUX";
  }
  return "?";
}

const char* result_name(Result r) { return r == Result::STABLE ? "STABLE" : "INCONCLUSIVE"; }

std::string lambda_symbol(int j, int k) {
  if (j >= 1 && j <= 9 && k >= 1 && k <= 9) return "λ_{" + std::to_string(j) + std::to_string(k) + "}";
  return "λ_{" + std::to_string(j) + "," + std::to_string(k) + "}";
}

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  return out;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
  return out;
}

// max of λ_{j,k} over dirs, with its symbol.
struct Term {
  double value = 0.0;
  std::string symbol;
};

Term max_term(const Network& net, int j, const std::vector<int>& dirs) {
  Term t;
  t.value = -std::numeric_limits<double>::infinity();
  std::string inner;
  for (int k : dirs) {
    t.value = std::max(t.value, net.lambda(j, k));
    if (!inner.empty()) inner += ",";
    inner += lambda_symbol(j, k);
  }
  t.symbol = dirs.size() == 1 ? inner : "max(" + inner + ")";
  return t;
}

std::string join_min(const std::vector<std::string>& parts) {
  if (parts.size() == 1) return parts.front();
  std::string s = "min(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
  return s + ")";
}

RhoEstimate l41(const Network& net, int j, const std::vector<int>& C, const std::vector<int>& E,
                const std::vector<int>& T) {
  if (C.empty() || E.empty())
    throw Error("MissingIngredient", "equilibrium " + std::to_string(j) + " lacks contracting or expanding directions");
  RhoEstimate r;
  r.equilibrium = j;
  r.lemma = Lemma::L41;
  Term c = max_term(net, j, C), e = max_term(net, j, E);
  r.ingredients = {{"c", c.symbol, c.value}, {"e", e.symbol, e.value}};
  r.value = -c.value / e.value;
  std::vector<std::string> parts{"-" + c.symbol + "/" + e.symbol};
  if (!T.empty()) {
    Term t = max_term(net, j, T);
    r.ingredients.push_back({"t", t.symbol, t.value});
    r.value = std::min(r.value, 1.0 - t.value / e.value);
    parts.push_back("1-" + t.symbol + "/" + e.symbol);
  }
  r.formula = join_min(parts);
  return r;
}

RhoEstimate unit(int j, Lemma lemma) {
  RhoEstimate r;
  r.equilibrium = j;
  r.lemma = lemma;
  r.value = 1.0;
  r.formula = "1";
  return r;
}

// c/(c-e) with both symbols.
void retention(RhoEstimate& r, const Term& c, const Term& e, const std::string& cname, const std::string& ename) {
  r.ingredients.push_back({cname, c.symbol, c.value});
  r.ingredients.push_back({ename, e.symbol, e.value});
  r.value = c.value / (c.value - e.value);
  r.formula = c.symbol + "/(" + c.symbol + "-" + e.symbol + ")";
}

}  // namespace

std::vector<DeltaClique> analysis_cliques(const Network& net) {
  if (net.mode != Mode::AC) return {};
  return find_delta_cliques(net);
}

LocalRoles local_roles(const Network& net, const std::vector<DeltaClique>& cliques, int j) {
  LocalRoles R;
  if (net.mode == Mode::EXTENDED) {
    const Roles& u = net.roles.at(j);
    R.radial = sorted_unique(u.radial);
    R.contracting = sorted_unique(u.contracting);
    R.expanding = sorted_unique(u.expanding);
    R.transverse = sorted_unique(u.transverse);
    R.m_point = u.m_point;
    R.f_long = sorted_unique(u.f_long);
    R.s_long = sorted_unique(u.s_long);
    return R;
  }
  const int ax = net.axis_of(j);
  R.radial = {ax};
  for (int p : net.predecessors(j)) R.contracting.push_back(net.axis_of(p));
  for (int s : net.successors(j)) R.expanding.push_back(net.axis_of(s));
  R.contracting = sorted_unique(R.contracting);
  R.expanding = sorted_unique(R.expanding);
  for (int k = 1; k <= net.n; ++k) {
    if (k == ax) continue;
    if (std::find(R.contracting.begin(), R.contracting.end(), k) != R.contracting.end()) continue;
    if (std::find(R.expanding.begin(), R.expanding.end(), k) != R.expanding.end()) continue;
    R.transverse.push_back(k);
  }
  for (const auto& q : cliques) {
    if (q.m != j) continue;
    R.as_m.push_back(q);
    R.f_long.push_back(net.axis_of(q.b));
    R.s_long.push_back(net.axis_of(q.e));
  }
  R.m_point = !R.as_m.empty();
  R.f_long = sorted_unique(R.f_long);
  R.s_long = sorted_unique(R.s_long);
  return R;
}

RhoEstimate compute_rho(const Network& net, const std::vector<DeltaClique>& cliques, int j) {
  const LocalRoles R = local_roles(net, cliques, j);
  if (net.mode == Mode::AC) {
    for (std::size_t a = 0; a < R.as_m.size(); ++a)
      for (std::size_t b = a + 1; b < R.as_m.size(); ++b)
        if (R.as_m[a].b == R.as_m[b].b)
          throw Error("RoleConflict", "equilibrium " + std::to_string(j) +
                                          " is m-point of two cliques sharing the f-long connection " +
                                          std::to_string(R.as_m[a].b) + "->" + std::to_string(j));
  }
  if (!R.m_point) return l41(net, j, R.contracting, R.expanding, R.transverse);

  if (R.expanding.size() == 1) {
    const bool exact = R.contracting == R.f_long;
    const bool single = net.mode == Mode::AC ? R.as_m.size() == 1 : R.f_long.size() == 1;
    if (exact && single && R.contracting.size() == 1) return unit(j, Lemma::L42);
    const std::vector<int> rest = minus(R.contracting, R.f_long);
    if (rest.empty()) {
      RhoEstimate r = unit(j, Lemma::L43);
      r.missing_ingredient = true;
      return r;
    }
    RhoEstimate r;
    r.equilibrium = j;
    r.lemma = Lemma::L43;
    Term c = max_term(net, j, rest), e = max_term(net, j, R.expanding);
    r.ingredients = {{"c", c.symbol, c.value}, {"e", e.symbol, e.value}};
    r.value = std::min(-c.value / e.value, 1.0);
    r.formula = "min(-" + c.symbol + "/" + e.symbol + ", 1)";
    return r;
  }
  if (R.expanding.size() != 2)
    throw Error("InvariantError", "equilibrium " + std::to_string(j) + " has " +
                                      std::to_string(R.expanding.size()) + " expanding directions");

  if (R.contracting.size() == 1) {
    RhoEstimate r;
    r.equilibrium = j;
    r.lemma = Lemma::L44;
    std::vector<int> other = minus(R.expanding, R.s_long);
    if (other.empty()) other = R.expanding;
    retention(r, max_term(net, j, R.contracting), max_term(net, j, other), "c", "e_2");
    return r;
  }

  RhoEstimate r;
  r.equilibrium = j;
  r.lemma = Lemma::L45;
  std::vector<std::string> parts;
  std::vector<double> values;
  const std::vector<int> rest = minus(R.contracting, R.f_long);
  Term e = max_term(net, j, R.expanding);
  if (!rest.empty()) {
    Term c = max_term(net, j, rest);
    const double a1 = -c.value / e.value;
    r.ingredients.push_back({"a_1", "-" + c.symbol + "/" + e.symbol, a1});
    parts.push_back("-" + c.symbol + "/" + e.symbol);
    values.push_back(a1);
  }
  int idx = 1;
  for (int p : R.expanding) {
    std::vector<int> group;
    if (net.mode == Mode::AC) {
      for (const auto& q : R.as_m)
        if (net.axis_of(q.e) == p) group.push_back(net.axis_of(q.b));
    } else if (std::find(R.s_long.begin(), R.s_long.end(), p) != R.s_long.end()) {
      group = R.f_long;
    }
    group = sorted_unique(group);
    if (group.empty()) continue;
    Term ct = max_term(net, j, group);
    Term ep{net.lambda(j, p), lambda_symbol(j, p)};
    const double a = ct.value / (ct.value - ep.value);
    const std::string s = ct.symbol + "/(" + ct.symbol + "-" + ep.symbol + ")";
    r.ingredients.push_back({"c_tilde_" + std::to_string(idx), ct.symbol, ct.value});
    r.ingredients.push_back({"a_" + std::to_string(idx + 1), s, a});
    parts.push_back(s);
    values.push_back(a);
    ++idx;
  }
  if (values.empty()) throw Error("MissingIngredient", "no term of the exponent is defined at " + std::to_string(j));
  r.value = *std::min_element(values.begin(), values.end());
  r.formula = join_min(parts);
  return r;
}

RhoEstimate compute_rho_star(const Network& net, const std::vector<DeltaClique>& cliques, int j,
                             const Connection& in_edge, const Connection& out_edge) {
  if (in_edge.to != j || out_edge.from != j)
    throw Error("InvariantError", "exponent along a walk needs in_edge -> " + std::to_string(j) + " -> out_edge");
  const LocalRoles R = local_roles(net, cliques, j);

  if (net.mode == Mode::AC) {
    const int ci = net.axis_of(in_edge.from), eo = net.axis_of(out_edge.to);
    bool pass = false;
    for (const auto& q : R.as_m)
      if (q.b == in_edge.from && q.e == out_edge.to) pass = true;
    if (!pass) {
      std::vector<int> T;
      for (int k = 1; k <= net.n; ++k)
        if (k != R.radial.front() && k != ci && net.lambda(j, k) < 0) T.push_back(k);
      return l41(net, j, {ci}, {eo}, T);
    }
    if (out_edge.dim == 1 || R.expanding.size() != 2) return unit(j, Lemma::L42);
    RhoEstimate r;
    r.equilibrium = j;
    Term c{net.lambda(j, ci), lambda_symbol(j, ci)};
    if (R.contracting.size() == 1) {
      r.lemma = Lemma::L44;
      const int other = R.expanding[0] == eo ? R.expanding[1] : R.expanding[0];
      retention(r, c, {net.lambda(j, other), lambda_symbol(j, other)}, "c", "e_2");
    } else {
      r.lemma = Lemma::L45;
      retention(r, c, {net.lambda(j, eo), lambda_symbol(j, eo)}, "c_tilde_1", "e_1");
    }
    return r;
  }

  std::vector<int> in_dirs = intersect(in_edge.subspace, R.contracting);
  std::vector<int> out_dirs = intersect(out_edge.subspace, R.expanding);
  if (in_dirs.empty()) in_dirs = R.contracting;
  if (out_dirs.empty()) out_dirs = R.expanding;
  const std::vector<int> fl = intersect(in_dirs, R.f_long);
  const std::vector<int> sl = intersect(out_dirs, R.s_long);
  if (R.m_point && !fl.empty() && !sl.empty()) {
    if (out_dirs.size() == 1) return unit(j, Lemma::L42);
    RhoEstimate r;
    r.equilibrium = j;
    r.lemma = Lemma::L44;
    std::vector<int> other = minus(out_dirs, R.s_long);
    if (other.empty()) other = out_dirs;
    retention(r, max_term(net, j, fl), max_term(net, j, other), "c", "e_2");
    return r;
  }
  std::vector<int> T;
  for (int k = 1; k <= net.n; ++k) {
    if (std::find(R.radial.begin(), R.radial.end(), k) != R.radial.end()) continue;
    if (std::find(in_dirs.begin(), in_dirs.end(), k) != in_dirs.end()) continue;
    if (net.lambda(j, k) < 0) T.push_back(k);
  }
  return l41(net, j, in_dirs, out_dirs, T);
}

std::vector<RhoEstimate> rho_table(const Network& net) {
  const auto cliques = analysis_cliques(net);
  std::vector<RhoEstimate> out;
  for (int id : net.ids()) out.push_back(compute_rho(net, cliques, id));
  return out;
}

namespace {

struct Indexed {
  std::vector<int> ids;
  std::map<int, int> index;
  Digraph g;
};

Indexed index_network(const Network& net) {
  Indexed x;
  x.ids = net.ids();
  for (std::size_t i = 0; i < x.ids.size(); ++i) x.index[x.ids[i]] = static_cast<int>(i);
  x.g = Digraph(static_cast<int>(x.ids.size()));
  for (const auto& c : net.connections) x.g.add_arc(x.index[c.from], x.index[c.to]);
  return x;
}

std::string q_label(int a, int b, int c) {
  if (a <= 9 && b <= 9 && c <= 9) return "q_{" + std::to_string(a) + std::to_string(b) + std::to_string(c) + "}";
  return "q_{" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "}";
}

void finish(Witness& w) {
  w.log_product = 0.0;
  for (const auto& f : w.factors) w.log_product += std::log(f.value);
  w.product = std::exp(w.log_product);
  w.marginal = std::abs(w.product - 1.0) <= kMarginalBand;
}

}  // namespace

std::vector<std::vector<int>> enumerate_cycles(const Network& net) {
  Indexed x = index_network(net);
  std::vector<std::vector<int>> out;
  for (const auto& c : elementary_cycles(x.g)) {
    std::vector<int> ids;
    for (int v : c) ids.push_back(x.ids[v]);
    out.push_back(ids);
  }
  return out;
}

WeightedDigraph node_weighted_graph(const Digraph& g, const std::vector<double>& rho) {
  WeightedDigraph w;
  w.n = g.n;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u]) w.arcs.push_back({u, v, std::log(rho[v])});
  return w;
}

TripletGraph triplet_graph(const Digraph& g, const std::function<double(int, int, int)>& rho_star) {
  TripletGraph t;
  std::vector<std::vector<int>> out_arcs(g.n);
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u]) {
      out_arcs[u].push_back(static_cast<int>(t.arcs.size()));
      t.arcs.push_back({u, v});
    }
  t.graph.n = static_cast<int>(t.arcs.size());
  for (int a = 0; a < t.graph.n; ++a) {
    const auto [u, v] = t.arcs[a];
    for (int b : out_arcs[v]) t.graph.arcs.push_back({a, b, std::log(rho_star(u, v, t.arcs[b].second))});
  }
  return t;
}

bool all_cycles_exceed(const WeightedDigraph& g, double tol) {
  return !detect_low_cycle(g, std::log1p(tol)).found;
}

StabilityVerdict check_thas(const Network& net, double tol, std::size_t max_witnesses) {
  StabilityVerdict v;
  v.theorem = Theorem::THAS;
  v.tolerance = tol;
  const auto table = rho_table(net);
  Indexed x = index_network(net);
  std::vector<double> rho;
  for (const auto& r : table) rho.push_back(r.value);
  const double tau = std::log1p(tol);
  LowCycle low = detect_low_cycle(node_weighted_graph(x.g, rho), tau);
  if (!low.found) {
    v.result = Result::STABLE;
    return v;
  }
  v.result = Result::INCONCLUSIVE;
  auto make = [&](const std::vector<int>& cyc) {
    Witness w;
    for (int i : cyc) {
      w.nodes.push_back(x.ids[i]);
      w.factors.push_back({"rho_" + std::to_string(x.ids[i]), rho[i]});
    }
    finish(w);
    return w;
  };
  if (x.ids.size() <= kThasEnumerationNodes) {
    for (const auto& cyc : elementary_cycles(x.g)) {
      double s = 0.0;
      for (int i : cyc) s += std::log(rho[i]);
      if (s <= tau) {
        if (v.witnesses.size() >= max_witnesses) {
          v.witnesses_truncated = true;
          break;
        }
        v.witnesses.push_back(make(cyc));
      }
    }
  }
  if (v.witnesses.empty() && !low.witness.empty()) v.witnesses.push_back(make(low.witness));
  return v;
}

StabilityVerdict check_thas2(const Network& net, double tol, std::size_t max_witnesses) {
  StabilityVerdict v;
  v.theorem = Theorem::THAS2;
  v.tolerance = tol;
  const auto cliques = analysis_cliques(net);
  Indexed x = index_network(net);
  auto star = [&](int u, int m, int w) {
    const int a = x.ids[u], b = x.ids[m], c = x.ids[w];
    return compute_rho_star(net, cliques, b, *net.find(a, b), *net.find(b, c)).value;
  };
  TripletGraph t = triplet_graph(x.g, star);
  const double tau = std::log1p(tol);
  LowCycle low = detect_low_cycle(t.graph, tau);
  if (!low.found) {
    v.result = Result::STABLE;
    return v;
  }
  v.result = Result::INCONCLUSIVE;
  auto make = [&](const std::vector<int>& cyc) {
    std::vector<int> walk;
    for (int a : cyc) walk.push_back(x.ids[t.arcs[a].first]);
    return walk_exponent(net, cliques, walk);
  };
  if (static_cast<std::size_t>(t.graph.n) <= kThas2EnumerationVertices) {
    Digraph tg(t.graph.n);
    std::map<std::pair<int, int>, double> weight;
    for (const auto& a : t.graph.arcs) {
      tg.add_arc(a.u, a.v);
      weight[{a.u, a.v}] = a.w;
    }
    for (const auto& cyc : elementary_cycles(tg)) {
      double s = 0.0;
      for (std::size_t i = 0; i < cyc.size(); ++i) s += weight[{cyc[i], cyc[(i + 1) % cyc.size()]}];
      if (s <= tau) {
        if (v.witnesses.size() >= max_witnesses) {
          v.witnesses_truncated = true;
          break;
        }
        v.witnesses.push_back(make(cyc));
      }
    }
  }
  if (v.witnesses.empty() && !low.witness.empty()) v.witnesses.push_back(make(low.witness));
  return v;
}

StabilityVerdict check_lv_aux(const Network& net, double tol) {
  StabilityVerdict v;
  v.theorem = Theorem::LV_AUX;
  v.tolerance = tol;
  v.note = "valid for Lotka-Volterra realizations per cited literature";
  const auto cliques = analysis_cliques(net);
  for (int j : net.ids()) {
    const LocalRoles R = local_roles(net, cliques, j);
    if (R.contracting.empty() || R.expanding.empty()) continue;
    double c = std::numeric_limits<double>::infinity(), e = std::numeric_limits<double>::infinity();
    for (int k : R.contracting) c = std::min(c, net.lambda(j, k));
    for (int k : R.expanding) e = std::min(e, net.lambda(j, k));
    const double ratio = std::abs(c / e);
    if (ratio <= 1.0 + tol) {
      Witness w;
      w.nodes = {j};
      w.factors = {{"|c_" + std::to_string(j) + "/e_" + std::to_string(j) + "|", ratio}};
      finish(w);
      v.witnesses.push_back(w);
    }
  }
  v.result = v.witnesses.empty() ? Result::STABLE : Result::INCONCLUSIVE;
  return v;
}

Witness walk_exponent(const Network& net, const std::vector<DeltaClique>& cliques, const std::vector<int>& walk) {
  Witness w;
  w.nodes = walk;
  const std::size_t k = walk.size();
  for (std::size_t s = 1; s <= k; ++s) {
    const std::size_t i = s % k;
    const int a = walk[(i + k - 1) % k], b = walk[i], c = walk[(i + 1) % k];
    const Connection* in = net.find(a, b);
    const Connection* out = net.find(b, c);
    if (!in || !out)
      throw Error("InvariantError", "walk uses a missing connection around equilibrium " + std::to_string(b));
    w.factors.push_back({q_label(a, b, c), compute_rho_star(net, cliques, b, *in, *out).value});
  }
  finish(w);
  return w;
}

namespace {

// Lexicographically smallest Eulerian circuit over the arc multiset of the
// triplet graph, as a sequence of triplet-graph vertices.
bool euler_dfs(int cur, int start, std::size_t remaining, std::map<std::pair<int, int>, int>& arcs,
               const std::vector<std::vector<int>>& succ, const std::vector<std::pair<int, int>>& edges,
               std::vector<int>& path) {
  if (remaining == 0) return cur == start;
  for (int nx : succ[cur]) {
    auto it = arcs.find({cur, nx});
    if (it == arcs.end() || it->second == 0) continue;
    --it->second;
    path.push_back(nx);
    if (euler_dfs(nx, start, remaining - 1, arcs, succ, edges, path)) return true;
    path.pop_back();
    ++it->second;
  }
  return false;
}

}  // namespace

std::vector<std::vector<int>> list_semilinear_walks(const Network& net, int anchor, std::size_t cap) {
  Indexed x = index_network(net);
  std::vector<std::pair<int, int>> edges;  // in ids
  for (const auto& c : net.connections) edges.push_back({c.from, c.to});
  const int E = static_cast<int>(edges.size());
  Digraph tg(E);
  std::vector<std::vector<int>> succ(E);
  for (int a = 0; a < E; ++a)
    for (int b = 0; b < E; ++b)
      if (edges[a].second == edges[b].first) succ[a].push_back(b);
  for (int a = 0; a < E; ++a) {
    std::sort(succ[a].begin(), succ[a].end(),
              [&](int p, int q) { return edges[p].second < edges[q].second; });
    for (int b : succ[a]) tg.add_arc(a, b);
  }
  const auto cycles = elementary_cycles(tg);
  const std::size_t C = cycles.size();
  std::vector<int> anchor_count(C, 0);
  for (std::size_t i = 0; i < C; ++i)
    for (int a : cycles[i])
      if (edges[a].first == anchor) ++anchor_count[i];

  std::set<std::vector<int>> walks;
  std::vector<std::size_t> chosen;
  std::size_t visited = 0;
  const std::size_t visit_cap = std::size_t{1} << 20;

  auto connected = [&]() {
    std::vector<int> parent(chosen.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int a) { return parent[a] == a ? a : parent[a] = root(parent[a]); };
    for (std::size_t p = 0; p < chosen.size(); ++p)
      for (std::size_t q = p + 1; q < chosen.size(); ++q) {
        const auto& A = cycles[chosen[p]];
        const auto& B = cycles[chosen[q]];
        bool share = false;
        for (int a : A)
          if (std::find(B.begin(), B.end(), a) != B.end()) share = true;
        if (share) parent[root(static_cast<int>(p))] = root(static_cast<int>(q));
      }
    for (std::size_t p = 0; p < chosen.size(); ++p)
      if (root(static_cast<int>(p)) != root(0)) return false;
    return true;
  };

  auto emit = [&]() {
    std::map<std::pair<int, int>, int> arcs;
    std::size_t total = 0;
    std::set<int> vertices;
    for (std::size_t i : chosen) {
      const auto& cyc = cycles[i];
      for (std::size_t s = 0; s < cyc.size(); ++s) {
        ++arcs[{cyc[s], cyc[(s + 1) % cyc.size()]}];
        ++total;
        vertices.insert(cyc[s]);
      }
    }
    int first_node = std::numeric_limits<int>::max();
    bool has_anchor = false;
    for (int a : vertices) {
      first_node = std::min(first_node, edges[a].first);
      if (edges[a].first == anchor) has_anchor = true;
    }
    if (has_anchor) first_node = anchor;
    std::vector<int> starts;
    for (int a : vertices)
      if (edges[a].first == first_node) starts.push_back(a);
    std::sort(starts.begin(), starts.end(), [&](int p, int q) { return edges[p].second < edges[q].second; });
    std::vector<int> best;
    for (int s : starts) {
      auto copy = arcs;
      std::vector<int> path{s};
      if (!euler_dfs(s, s, total, copy, succ, edges, path)) continue;
      path.pop_back();
      std::vector<int> nodes;
      for (int a : path) nodes.push_back(edges[a].first);
      if (best.empty() || nodes < best) best = nodes;
    }
    if (!best.empty()) walks.insert(best);
  };

  std::function<void(std::size_t, int)> dfs = [&](std::size_t from, int anchors) {
    for (std::size_t i = from; i < C; ++i) {
      if (walks.size() >= cap || ++visited > visit_cap) return;
      if (anchors + anchor_count[i] > 1) continue;
      chosen.push_back(i);
      if (connected()) emit();
      dfs(i + 1, anchors + anchor_count[i]);
      chosen.pop_back();
    }
  };
  dfs(0, 0);

  std::vector<std::vector<int>> out(walks.begin(), walks.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::string render_condition(const Network& net, const std::vector<RhoEstimate>& table) {
  std::map<int, const RhoEstimate*> by_id;
  for (const auto& r : table) by_id[r.equilibrium] = &r;
  auto unit_rho = [&](int j) {
    const RhoEstimate* r = by_id.at(j);
    return r->lemma == Lemma::L42 || r->missing_ingredient;
  };
  auto strictly_below_one = [&](int j) {
    const Lemma l = by_id.at(j)->lemma;
    return l == Lemma::L44 || l == Lemma::L45;
  };
  std::set<std::set<int>> conds;
  for (const auto& cyc : enumerate_cycles(net)) {
    std::set<int> s;
    for (int j : cyc)
      if (!unit_rho(j)) s.insert(j);
    conds.insert(s);
  }
  // A cycle condition is implied by a larger one whose extra factors are all below one.
  std::vector<std::set<int>> kept;
  for (const auto& a : conds) {
    bool implied = false;
    for (const auto& b : conds) {
      if (b.size() <= a.size() || !std::includes(b.begin(), b.end(), a.begin(), a.end())) continue;
      bool below = true;
      for (int j : b)
        if (!a.count(j) && !strictly_below_one(j)) below = false;
      if (below) implied = true;
    }
    if (!implied) kept.push_back(a);
  }
  auto rho = [](int j) { return "rho_" + std::to_string(j); };
  auto product = [&](const std::set<int>& s) {
    std::string out;
    for (int j : s) out += (out.empty() ? "" : "*") + rho(j);
    return out.empty() ? std::string("1") : out;
  };
  if (kept.empty()) return "1 > 1";
  std::set<int> common = kept.front();
  for (const auto& s : kept) {
    std::set<int> next;
    std::set_intersection(common.begin(), common.end(), s.begin(), s.end(), std::inserter(next, next.begin()));
    common = next;
  }
  bool simple = true;
  bool has_empty = false;
  std::vector<int> singles;
  for (const auto& s : kept) {
    std::vector<int> rest;
    std::set_difference(s.begin(), s.end(), common.begin(), common.end(), std::back_inserter(rest));
    if (rest.size() > 1) simple = false;
    if (rest.empty()) has_empty = true;
    else singles.push_back(rest.front());
  }
  if (!simple) {
    std::string out;
    for (const auto& s : kept) out += (out.empty() ? "" : ", ") + product(s) + " > 1";
    return out;
  }
  std::string out = common.empty() ? "" : product(common);
  if (!singles.empty()) {
    std::sort(singles.begin(), singles.end());
    std::string m;
    if (singles.size() == 1 && !has_empty) {
      m = rho(singles.front());
    } else {
      m = "min(";
      for (std::size_t i = 0; i < singles.size(); ++i) m += (i ? "," : "") + rho(singles[i]);
      if (has_empty) m += ",1";
      m += ")";
    }
    out += (out.empty() ? "" : "*") + m;
  }
  if (out.empty()) out = "1";
  return out + " > 1";
}

}  // namespace hetnet
