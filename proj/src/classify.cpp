#include "hetnet/classify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hetnet/graph.hpp"

namespace hetnet {

namespace {

std::string edge_str(int a, int b) { return std::to_string(a) + "->" + std::to_string(b); }

[[noreturn]] void not_representable(const std::string& msg) { throw Error("NotRepresentable", msg); }

void require_ac(const Network& net, const char* what) {
  if (net.mode != Mode::AC)
    throw Error("NotApplicable", std::string(what) + " requires an axial (AC) network; role-annotated networks are refused");
}

}  // namespace

const char* case_name(StructureCase c) { return c == StructureCase::I ? "I" : "II"; }

std::vector<DeltaClique> find_delta_cliques_lenient(const Network& net,
                                                    std::vector<std::array<int, 3>>* incomplete) {
  std::vector<DeltaClique> out;
  for (const auto& eq : net.equilibria) {
    const int i = eq.id;
    std::vector<int> succ = net.successors(i);
    if (succ.size() != 2) continue;
    const int j = succ[0], k = succ[1];
    bool closed = false;
    for (auto [m, e] : {std::pair{j, k}, std::pair{k, j}}) {
      if (const Connection* s = net.find(m, e)) {
        DeltaClique q;
        q.b = i;
        q.m = m;
        q.e = e;
        q.short_conn = *net.find(i, e);
        q.f_long = *net.find(i, m);
        q.s_long = *s;
        out.push_back(q);
        closed = true;
      }
    }
    if (!closed && incomplete) incomplete->push_back({i, j, k});
  }
  std::sort(out.begin(), out.end(), [](const DeltaClique& a, const DeltaClique& b) {
    return std::tie(a.b, a.m, a.e) < std::tie(b.b, b.m, b.e);
  });
  return out;
}

std::vector<DeltaClique> find_delta_cliques(const Network& net) {
  std::vector<std::array<int, 3>> missing;
  auto out = find_delta_cliques_lenient(net, &missing);
  if (!missing.empty()) {
    const auto& t = missing.front();
    throw Error("IncompleteClique", "IncompleteClique(" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " +
                                        std::to_string(t[2]) + "): neither " + edge_str(t[1], t[2]) + " nor " +
                                        edge_str(t[2], t[1]) + " is present");
  }
  return out;
}

AcReport check_ac(const Network& net) {
  AcReport rep;
  auto add = [&](std::string kind, std::string msg, std::vector<int> ids) {
    rep.violations.push_back({std::move(kind), std::move(msg), std::move(ids)});
  };
  if (net.mode != Mode::AC) {
    add("not-ac-mode", "network carries role annotations and is not an ac-network", {});
    return rep;
  }
  std::map<int, int> per_axis;
  for (const auto& e : net.equilibria) {
    if (e.axis < 1 || e.axis > net.n) add("not-axial", "equilibrium " + std::to_string(e.id) + " is not on an axis", {e.id});
    else if (per_axis[e.axis]++)
      add("axis-shared", "axis " + std::to_string(e.axis) + " carries more than one equilibrium", {e.id});
  }
  for (const auto& c : net.connections) {
    if (c.from == c.to) add("homoclinic", "connection " + edge_str(c.from, c.to) + " is homoclinic", {c.from});
    if (c.from < c.to && net.has_edge(c.to, c.from))
      add("two-cycle", "equilibria " + std::to_string(c.from) + " and " + std::to_string(c.to) + " form a 2-cycle",
          {c.from, c.to});
  }
  for (const auto& eq : net.equilibria) {
    const int j = eq.id;
    int positive = 0;
    std::set<int> expanding, contracting;
    for (int s : net.successors(j)) expanding.insert(net.axis_of(s));
    for (int p : net.predecessors(j)) contracting.insert(net.axis_of(p));
    for (int k = 1; k <= net.n; ++k) {
      if (k == eq.axis) continue;
      const double l = net.lambda(j, k);
      if (l > 0) {
        ++positive;
        const int target = net.node_on_axis(k);
        if (!target || !net.has_edge(j, target))
          add("unclean",
              "lambda_{" + std::to_string(j) + "," + std::to_string(k) +
                  "} > 0 but no connection leaves " + std::to_string(j) + " along axis " + std::to_string(k),
              {j});
      }
      if (!expanding.count(k) && !contracting.count(k) && l > 0)
        add("transverse-positive",
            "transverse eigenvalue lambda_{" + std::to_string(j) + "," + std::to_string(k) + "} is positive", {j});
    }
    if (positive < 1 || positive > 2)
      add("expanding-count",
          "equilibrium " + std::to_string(j) + " has " + std::to_string(positive) + " positive eigenvalues (need 1 or 2)",
          {j});
    if (net.successors(j).size() > 2)
      add("expanding-count", "equilibrium " + std::to_string(j) + " has more than two outgoing connections", {j});
  }
  std::vector<std::array<int, 3>> missing;
  find_delta_cliques_lenient(net, &missing);
  for (const auto& t : missing)
    add("incomplete-clique",
        "equilibrium " + std::to_string(t[0]) + " has two expanding directions (toward " + std::to_string(t[1]) +
            " and " + std::to_string(t[2]) + ") but no clique closes: neither " + edge_str(t[1], t[2]) + " nor " +
            edge_str(t[2], t[1]) + " exists",
        {t[0], t[1], t[2]});
  return rep;
}

std::vector<std::vector<int>> find_flong_free_cycles(const Network& net) {
  require_ac(net, "find_flong_free_cycles");
  std::set<std::pair<int, int>> flong;
  for (const auto& q : find_delta_cliques(net)) flong.insert({q.f_long.from, q.f_long.to});
  std::vector<int> ids = net.ids();
  std::map<int, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);
  Digraph g(static_cast<int>(ids.size()));
  for (const auto& c : net.connections)
    if (!flong.count({c.from, c.to})) g.add_arc(index[c.from], index[c.to]);
  std::vector<std::vector<int>> out;
  for (const auto& cyc : elementary_cycles(g)) {
    std::vector<int> c;
    for (int v : cyc) c.push_back(ids[v]);
    out.push_back(c);
  }
  if (out.empty()) throw Error("InternalError", "validated ac-network has no cycle free of f-long connections");
  return out;
}

namespace {

std::vector<int> rotate_base(const Network& net, std::vector<int> base, bool case_one) {
  std::set<int> on(base.begin(), base.end());
  int start = *std::min_element(base.begin(), base.end());
  if (!case_one) {
    int best = 0;
    for (int v : base) {
      for (int w : net.successors(v))
        if (!on.count(w) && (best == 0 || v < best)) best = v;
    }
    if (best) start = best;
  }
  std::rotate(base.begin(), std::find(base.begin(), base.end(), start), base.end());
  return base;
}

struct GroupAttempt {
  bool ok = false;
  std::vector<std::vector<int>> groups;
  std::vector<OptionalConnection> optional;
};

GroupAttempt try_grouping(const Network& net, const std::vector<int>& base, const std::map<int, int>& group_of) {
  GroupAttempt res;
  const int J = static_cast<int>(base.size());
  auto mod = [J](int x) { return ((x % J) + J) % J; };
  std::vector<std::vector<int>> groups(J);
  std::vector<std::set<int>> pending(J);
  for (const auto& [v, g] : group_of) pending[g].insert(v);
  for (int j = 0; j < J; ++j) {
    groups[j].push_back(base[j]);
    int cur = base[j];
    while (!pending[j].empty()) {
      int nxt = 0, count = 0;
      for (int w : net.successors(cur))
        if (pending[j].count(w)) {
          nxt = w;
          ++count;
        }
      if (count != 1) return res;
      groups[j].push_back(nxt);
      pending[j].erase(nxt);
      cur = nxt;
    }
  }
  std::set<std::pair<int, int>> compulsory;
  for (int j = 0; j < J; ++j) {
    const auto& g = groups[j];
    for (std::size_t s = 0; s < g.size(); ++s) {
      compulsory.insert({g[s], base[mod(j + 1)]});
      if (s > 0) compulsory.insert({g[s - 1], g[s]});
    }
  }
  for (const auto& e : compulsory)
    if (!net.has_edge(e.first, e.second)) return res;

  auto last = [&](int j) { return groups[mod(j)].back(); };
  std::vector<bool> back_edge(J, false);
  for (int j = 0; j < J; ++j)
    if (groups[j].size() > 1 && net.has_edge(last(j), base[j])) back_edge[j] = true;

  std::vector<int> optional_count(J, 0);
  for (const auto& c : net.connections) {
    if (compulsory.count({c.from, c.to})) continue;
    bool matched = false;
    for (int j = 0; j < J && !matched; ++j) {
      const std::string jl = "j=" + std::to_string(j + 1);
      if (c.from == last(j) && c.to == base[j] && groups[j].size() > 1) {
        res.optional.push_back({c.from, c.to, "[xi_{j,m_j}->xi_{j,0}] " + jl});
        ++optional_count[j];
        matched = true;
      } else if (c.from == last(j - 1) && c.to == last(j) && back_edge[j]) {
        res.optional.push_back({c.from, c.to, "[xi_{j-1,m_{j-1}}->xi_{j,m_j}] " + jl});
        matched = true;
      } else if (c.from == last(j) && groups[mod(j + 1)].size() > 1 && c.to == groups[mod(j + 1)][1]) {
        res.optional.push_back({c.from, c.to, "[xi_{j,m_j}->xi_{j+1,1}] " + jl});
        ++optional_count[j];
        matched = true;
      } else if (c.from == last(j) && c.to == base[mod(j + 2)]) {
        res.optional.push_back({c.from, c.to, "[xi_{j,m_j}->xi_{j+2,0}] " + jl});
        ++optional_count[j];
        matched = true;
      }
    }
    if (!matched) return res;
  }
  for (int j = 0; j < J; ++j)
    if (optional_count[j] > 1) return res;  // the optional connections are mutually exclusive
  res.ok = true;
  res.groups = std::move(groups);
  return res;
}

}  // namespace

StructureDecomposition decompose_structure(const Network& net, const std::vector<int>& base_in) {
  require_ac(net, "decompose_structure");
  if (base_in.size() < 3) not_representable("base cycle must have at least three equilibria");
  const int J = static_cast<int>(base_in.size());
  for (int i = 0; i < J; ++i)
    if (!net.has_edge(base_in[i], base_in[(i + 1) % J]))
      not_representable("base cycle edge " + edge_str(base_in[i], base_in[(i + 1) % J]) + " is missing");

  std::set<int> on(base_in.begin(), base_in.end());
  std::set<std::pair<int, int>> cycle_edges;
  for (int i = 0; i < J; ++i) cycle_edges.insert({base_in[i], base_in[(i + 1) % J]});
  bool extra = false;
  for (const auto& c : net.connections)
    if (on.count(c.from) && on.count(c.to) && !cycle_edges.count({c.from, c.to})) extra = true;

  StructureDecomposition d;
  d.J = J;
  d.base_cycle = rotate_base(net, base_in, extra);
  std::map<int, int> pos;
  for (int i = 0; i < J; ++i) pos[d.base_cycle[i]] = i;

  if (extra) {
    d.kase = StructureCase::I;
    if (J % 2 == 0) not_representable("extra connection between base-cycle equilibria but J is even");
    if (static_cast<int>(net.equilibria.size()) != J)
      not_representable("extra connection between base-cycle equilibria but some equilibria lie off the cycle");
    const int shift = (J + 1) / 2;
    for (int i = 0; i < J; ++i) {
      const int a = d.base_cycle[i], b = d.base_cycle[(i + shift) % J];
      if (!net.has_edge(a, b))
        not_representable("long connection " + edge_str(a, b) + " required by the odd-cycle pattern is missing");
      d.optional_connections.push_back({a, b, "[xi_i->xi_{i+(J+1)/2}]"});
    }
    for (const auto& c : net.connections) {
      const bool ok = cycle_edges.count({c.from, c.to}) ||
                      (on.count(c.from) && on.count(c.to) && (pos[c.to] - pos[c.from] + J) % J == shift);
      if (!ok) not_representable("connection " + edge_str(c.from, c.to) + " matches no pattern of the odd-cycle case");
    }
    return d;
  }

  d.kase = StructureCase::II;
  std::vector<int> free_nodes;
  std::map<int, std::vector<int>> candidates;
  for (const auto& e : net.equilibria) {
    if (on.count(e.id)) continue;
    free_nodes.push_back(e.id);
    for (int w : net.successors(e.id)) {
      auto it = pos.find(w);
      if (it != pos.end()) candidates[e.id].push_back((it->second - 1 + J) % J);
    }
    auto& cand = candidates[e.id];
    std::sort(cand.begin(), cand.end());
    if (cand.empty())
      not_representable("equilibrium " + std::to_string(e.id) + " has no connection into the base cycle");
  }
  std::size_t combos = 1;
  for (int v : free_nodes) {
    combos *= candidates[v].size();
    if (combos > (1u << 20)) not_representable("too many ambiguous group assignments");
  }
  for (std::size_t code = 0; code < combos; ++code) {
    std::map<int, int> group_of;
    std::size_t rest = code;
    for (int v : free_nodes) {
      const auto& cand = candidates[v];
      group_of[v] = cand[rest % cand.size()];
      rest /= cand.size();
    }
    GroupAttempt at = try_grouping(net, d.base_cycle, group_of);
    if (at.ok) {
      d.groups = std::move(at.groups);
      d.optional_connections = std::move(at.optional);
      return d;
    }
  }
  not_representable("no grouping of the equilibria reproduces the connection set with the allowed patterns");
}

StructureDecomposition decompose_structure(const Network& net) {
  auto cycles = find_flong_free_cycles(net);
  auto d = decompose_structure(net, cycles.front());
  d.primary = true;
  return d;
}

std::vector<StructureDecomposition> decompose_all(const Network& net) {
  std::vector<StructureDecomposition> out;
  for (const auto& c : find_flong_free_cycles(net)) out.push_back(decompose_structure(net, c));
  if (!out.empty()) out.front().primary = true;
  return out;
}

std::vector<std::pair<int, int>> expand_structure(const StructureDecomposition& d) {
  std::set<std::pair<int, int>> edges;
  const int J = d.J;
  for (int i = 0; i < J; ++i) edges.insert({d.base_cycle[i], d.base_cycle[(i + 1) % J]});
  if (d.kase == StructureCase::II) {
    for (int j = 0; j < J; ++j) {
      const auto& g = d.groups[j];
      for (std::size_t s = 0; s < g.size(); ++s) {
        edges.insert({g[s], d.base_cycle[(j + 1) % J]});
        if (s > 0) edges.insert({g[s - 1], g[s]});
      }
    }
  }
  for (const auto& o : d.optional_connections) edges.insert({o.from, o.to});
  return {edges.begin(), edges.end()};
}

}  // namespace hetnet
