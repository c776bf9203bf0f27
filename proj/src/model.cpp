#include "hetnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "hetnet/classify.hpp"

namespace hetnet {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error("SchemaError", msg); }
[[noreturn]] void invariant_error(const std::string& msg) { throw Error("InvariantError", msg); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) schema_error(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) schema_error(where + ": unknown key \"" + it.key() + "\"");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + ": missing key \"" + key + "\"");
  return *it;
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where + ": expected an integer");
  return v.get<int>();
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + ": expected a number");
  return v.get<double>();
}

std::vector<int> as_int_list(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& x : v) out.push_back(as_int(x, where));
  return out;
}

std::string ids_str(std::initializer_list<int> ids) {
  std::ostringstream os;
  bool first = true;
  for (int i : ids) {
    os << (first ? "" : ",") << i;
    first = false;
  }
  return os.str();
}

std::string edge_str(int a, int b) { return std::to_string(a) + "->" + std::to_string(b); }

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

const char* mode_name(Mode m) { return m == Mode::AC ? "AC" : "EXTENDED"; }

double Network::lambda(int j, int k) const {
  auto it = eigenvalues.find(j);
  if (it == eigenvalues.end() || k < 1 || k > static_cast<int>(it->second.size()))
    throw Error("InternalError", "no eigenvalue lambda_{" + std::to_string(j) + "," + std::to_string(k) + "}");
  return it->second[k - 1];
}

const Equilibrium& Network::equilibrium(int id) const {
  for (const auto& e : equilibria)
    if (e.id == id) return e;
  throw Error("InternalError", "unknown equilibrium id " + std::to_string(id));
}

bool Network::has_equilibrium(int id) const {
  return std::any_of(equilibria.begin(), equilibria.end(), [&](const Equilibrium& e) { return e.id == id; });
}

int Network::node_on_axis(int axis) const {
  if (axis <= 0) return 0;
  for (const auto& e : equilibria)
    if (e.axis == axis) return e.id;
  return 0;
}

const Connection* Network::find(int from, int to) const {
  for (const auto& c : connections)
    if (c.from == from && c.to == to) return &c;
  return nullptr;
}

std::vector<int> Network::successors(int id) const {
  std::vector<int> out;
  for (const auto& c : connections)
    if (c.from == id) out.push_back(c.to);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Network::predecessors(int id) const {
  std::vector<int> out;
  for (const auto& c : connections)
    if (c.to == id) out.push_back(c.from);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Network::ids() const {
  std::vector<int> out;
  for (const auto& e : equilibria) out.push_back(e.id);
  return out;
}

void canonicalize(Network& net) {
  std::sort(net.equilibria.begin(), net.equilibria.end(),
            [](const Equilibrium& a, const Equilibrium& b) { return a.id < b.id; });
  for (auto& c : net.connections) std::sort(c.subspace.begin(), c.subspace.end());
  std::sort(net.connections.begin(), net.connections.end(), [](const Connection& a, const Connection& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  for (auto& [id, r] : net.roles) {
    for (auto* v : {&r.radial, &r.contracting, &r.expanding, &r.transverse, &r.f_long, &r.s_long})
      std::sort(v->begin(), v->end());
  }
}

Network parse_network(const json& doc) {
  check_keys(doc, {"n", "equilibria", "eigenvalues", "connections", "roles"}, "network");
  Network net;
  net.n = as_int(require(doc, "n", "network"), "n");
  if (net.n < 1) schema_error("n: must be positive");
  net.mode = doc.contains("roles") ? Mode::EXTENDED : Mode::AC;

  const json& eqs = require(doc, "equilibria", "network");
  if (!eqs.is_array()) schema_error("equilibria: expected an array");
  for (const auto& e : eqs) {
    check_keys(e, {"id", "axis", "position"}, "equilibria[]");
    Equilibrium q;
    q.id = as_int(require(e, "id", "equilibria[]"), "equilibria[].id");
    if (e.contains("axis")) {
      q.axis = as_int(e["axis"], "equilibria[].axis");
      if (q.axis < 1) schema_error("equilibria[].axis: must be in 1..n");
    } else if (net.mode == Mode::AC) {
      schema_error("equilibria[]: missing key \"axis\" (only role-annotated networks may have off-axis nodes)");
    }
    if (e.contains("position")) q.position = as_real(e["position"], "equilibria[].position");
    net.equilibria.push_back(q);
  }

  const json& eig = require(doc, "eigenvalues", "network");
  if (!eig.is_object()) schema_error("eigenvalues: expected an object keyed by equilibrium id");
  for (auto it = eig.begin(); it != eig.end(); ++it) {
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      schema_error("eigenvalues: key \"" + it.key() + "\" is not an integer id");
    }
    if (!it.value().is_array()) schema_error("eigenvalues[" + it.key() + "]: expected an array");
    std::vector<double> row;
    for (const auto& x : it.value()) row.push_back(as_real(x, "eigenvalues[" + it.key() + "]"));
    net.eigenvalues[id] = row;
  }

  const json& conns = require(doc, "connections", "network");
  if (!conns.is_array()) schema_error("connections: expected an array");
  for (const auto& c : conns) {
    check_keys(c, {"from", "to", "dim", "subspace"}, "connections[]");
    Connection k;
    k.from = as_int(require(c, "from", "connections[]"), "connections[].from");
    k.to = as_int(require(c, "to", "connections[]"), "connections[].to");
    k.dim = as_int(require(c, "dim", "connections[]"), "connections[].dim");
    k.subspace = as_int_list(require(c, "subspace", "connections[]"), "connections[].subspace");
    net.connections.push_back(k);
  }

  if (net.mode == Mode::EXTENDED) {
    const json& roles = doc["roles"];
    if (!roles.is_object()) schema_error("roles: expected an object keyed by equilibrium id");
    for (auto it = roles.begin(); it != roles.end(); ++it) {
      const std::string where = "roles[" + it.key() + "]";
      check_keys(it.value(),
                 {"radial", "contracting", "expanding", "transverse", "m_point", "f_long", "s_long"}, where);
      int id = 0;
      try {
        id = std::stoi(it.key());
      } catch (const std::exception&) {
        schema_error(where + ": key is not an integer id");
      }
      Roles r;
      const json& v = it.value();
      r.radial = as_int_list(require(v, "radial", where), where + ".radial");
      r.contracting = as_int_list(require(v, "contracting", where), where + ".contracting");
      r.expanding = as_int_list(require(v, "expanding", where), where + ".expanding");
      r.transverse = as_int_list(require(v, "transverse", where), where + ".transverse");
      if (v.contains("m_point")) {
        if (!v["m_point"].is_boolean()) schema_error(where + ".m_point: expected a boolean");
        r.m_point = v["m_point"].get<bool>();
      }
      if (v.contains("f_long")) r.f_long = as_int_list(v["f_long"], where + ".f_long");
      if (v.contains("s_long")) r.s_long = as_int_list(v["s_long"], where + ".s_long");
      net.roles[id] = r;
    }
  }

  canonicalize(net);
  validate_network(net);
  return net;
}

Network parse_network_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("ParseError", std::string("malformed JSON: ") + e.what());
  }
  return parse_network(doc);
}

Network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ParseError", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network_text(ss.str());
}

void validate_network(const Network& net) {
  const int n = net.n;
  if (net.equilibria.empty()) invariant_error("network has no equilibria");

  std::set<int> ids, axes;
  for (const auto& e : net.equilibria) {
    if (!ids.insert(e.id).second) invariant_error("duplicate equilibrium id " + std::to_string(e.id));
    if (e.axis > n) invariant_error("equilibrium " + std::to_string(e.id) + " has axis outside 1..n");
    if (e.axis == 0 && net.mode == Mode::AC)
      invariant_error("equilibrium " + std::to_string(e.id) + " is not axial");
    if (e.axis > 0 && !axes.insert(e.axis).second)
      invariant_error("two equilibria on axis " + std::to_string(e.axis) + " (ids " +
                      std::to_string(net.node_on_axis(e.axis)) + "," + std::to_string(e.id) + ")");
    if (!(e.position > 0.0) || !std::isfinite(e.position))
      invariant_error("equilibrium " + std::to_string(e.id) + " has non-positive position");
  }

  for (const auto& [id, row] : net.eigenvalues) {
    if (!ids.count(id)) invariant_error("eigenvalues given for unknown equilibrium " + std::to_string(id));
  }
  for (int id : ids) {
    auto it = net.eigenvalues.find(id);
    if (it == net.eigenvalues.end()) invariant_error("missing eigenvalues for equilibrium " + std::to_string(id));
    if (static_cast<int>(it->second.size()) != n)
      invariant_error("eigenvalue row of equilibrium " + std::to_string(id) + " must have n entries");
    for (int k = 1; k <= n; ++k) {
      double l = it->second[k - 1];
      if (!std::isfinite(l)) invariant_error("non-finite eigenvalue at " + ids_str({id, k}));
      if (l == 0.0) invariant_error("zero eigenvalue (non-hyperbolic) at " + ids_str({id, k}));
    }
    int a = net.equilibrium(id).axis;
    if (a > 0 && !(it->second[a - 1] < 0.0))
      invariant_error("radial eigenvalue of equilibrium " + std::to_string(id) + " must be negative");
  }

  std::set<std::pair<int, int>> edges;
  for (const auto& c : net.connections) edges.insert({c.from, c.to});
  for (const auto& [a, b] : edges) {
    if (a < b && edges.count({b, a}))
      invariant_error("two-equilibrium cycle between " + std::to_string(a) + " and " + std::to_string(b));
  }
  edges.clear();
  for (const auto& c : net.connections) {
    const std::string tag = "connection " + edge_str(c.from, c.to);
    if (!ids.count(c.from) || !ids.count(c.to)) invariant_error(tag + " references an unknown equilibrium");
    if (c.from == c.to) invariant_error(tag + " is homoclinic");
    if (!edges.insert({c.from, c.to}).second) invariant_error(tag + " is listed twice");
    if (c.dim != 1 && c.dim != 2) invariant_error(tag + " must have dim 1 or 2");
    std::set<int> sub(c.subspace.begin(), c.subspace.end());
    if (sub.size() != c.subspace.size()) invariant_error(tag + " has repeated subspace coordinates");
    for (int k : c.subspace)
      if (k < 1 || k > n) invariant_error(tag + " has subspace coordinate outside 1..n");
    int af = net.axis_of(c.from), at = net.axis_of(c.to);
    if (af > 0 && !sub.count(af)) invariant_error(tag + " subspace must contain axis of " + std::to_string(c.from));
    if (at > 0 && !sub.count(at)) invariant_error(tag + " subspace must contain axis of " + std::to_string(c.to));
    if (net.mode == Mode::AC && static_cast<int>(sub.size()) != c.dim + 1)
      invariant_error(tag + " subspace size must be dim+1");
    if (af > 0 && at > 0) {
      if (!(net.lambda(c.from, at) > 0.0))
        invariant_error(tag + " needs lambda_{" + std::to_string(c.from) + "," + std::to_string(at) + "} > 0");
      if (!(net.lambda(c.to, af) < 0.0))
        invariant_error(tag + " needs lambda_{" + std::to_string(c.to) + "," + std::to_string(af) + "} < 0");
    }
  }

  // undirected connectivity
  std::map<int, std::vector<int>> und;
  for (const auto& c : net.connections) {
    und[c.from].push_back(c.to);
    und[c.to].push_back(c.from);
  }
  std::set<int> seen{*ids.begin()};
  std::vector<int> stack{*ids.begin()};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : und[v])
      if (seen.insert(w).second) stack.push_back(w);
  }
  if (seen.size() != ids.size()) {
    for (int id : ids)
      if (!seen.count(id)) invariant_error("network is not connected (equilibrium " + std::to_string(id) + ")");
  }

  if (net.mode == Mode::AC) {
    std::set<std::pair<int, int>> shorts;
    for (const auto& q : find_delta_cliques_lenient(net, nullptr)) shorts.insert({q.b, q.e});
    for (const auto& c : net.connections) {
      int expected = shorts.count({c.from, c.to}) ? 2 : 1;
      if (c.dim != expected)
        invariant_error("connection " + edge_str(c.from, c.to) + " declares dim " + std::to_string(c.dim) +
                        " but its clique structure requires dim " + std::to_string(expected));
    }
  } else {
    for (int id : ids) {
      auto it = net.roles.find(id);
      if (it == net.roles.end()) invariant_error("missing roles for equilibrium " + std::to_string(id));
    }
    for (const auto& [id, r] : net.roles) {
      const std::string tag = "roles of equilibrium " + std::to_string(id);
      if (!ids.count(id)) invariant_error("roles given for unknown equilibrium " + std::to_string(id));
      std::vector<int> seen_k(n + 1, 0);
      for (const auto* v : {&r.radial, &r.contracting, &r.expanding, &r.transverse})
        for (int k : *v) {
          if (k < 1 || k > n) invariant_error(tag + " use a coordinate outside 1..n");
          if (seen_k[k]++) invariant_error(tag + " assign coordinate " + std::to_string(k) + " twice");
        }
      for (int k = 1; k <= n; ++k)
        if (!seen_k[k]) invariant_error(tag + " do not cover coordinate " + std::to_string(k));
      if (r.radial.size() != 1) invariant_error(tag + " must name exactly one radial direction");
      if (r.expanding.empty() || r.expanding.size() > 2)
        invariant_error(tag + " must have one or two expanding directions");
      for (int k : r.radial)
        if (net.lambda(id, k) > 0) invariant_error(tag + ": radial eigenvalue must be negative");
      for (int k : r.contracting)
        if (net.lambda(id, k) > 0) invariant_error(tag + ": contracting eigenvalue must be negative");
      for (int k : r.expanding)
        if (net.lambda(id, k) < 0) invariant_error(tag + ": expanding eigenvalue must be positive");
      for (int k : r.f_long)
        if (!contains(r.contracting, k)) invariant_error(tag + ": f_long direction must be contracting");
      for (int k : r.s_long)
        if (!contains(r.expanding, k)) invariant_error(tag + ": s_long direction must be expanding");
    }
  }
}

json to_json(const Network& net) {
  json doc;
  doc["n"] = net.n;
  json eqs = json::array();
  for (const auto& e : net.equilibria) {
    json q;
    q["id"] = e.id;
    if (e.axis > 0) q["axis"] = e.axis;
    q["position"] = e.position;
    eqs.push_back(q);
  }
  doc["equilibria"] = eqs;
  json eig = json::object();
  for (const auto& [id, row] : net.eigenvalues) eig[std::to_string(id)] = row;
  doc["eigenvalues"] = eig;
  json conns = json::array();
  for (const auto& c : net.connections) {
    conns.push_back({{"from", c.from}, {"to", c.to}, {"dim", c.dim}, {"subspace", c.subspace}});
  }
  doc["connections"] = conns;
  if (net.mode == Mode::EXTENDED) {
    json roles = json::object();
    for (const auto& [id, r] : net.roles) {
      json v = {{"radial", r.radial},
                {"contracting", r.contracting},
                {"expanding", r.expanding},
                {"transverse", r.transverse}};
      if (r.m_point) v["m_point"] = true;
      if (!r.f_long.empty()) v["f_long"] = r.f_long;
      if (!r.s_long.empty()) v["s_long"] = r.s_long;
      roles[std::to_string(id)] = v;
    }
    doc["roles"] = roles;
  }
  return doc;
}

std::string serialize(const Network& net) { return to_json(net).dump(2) + "\n"; }

std::vector<int> complementary_subspace(const Connection& conn, int n) {
  std::vector<int> out;
  for (int k = 1; k <= n; ++k)
    if (!contains(conn.subspace, k)) out.push_back(k);
  return out;
}

}  // namespace hetnet
