#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hetnet {

// Every failure carries a machine-readable code (ParseError, SchemaError,
// InvariantError, IncompleteClique, ...) next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class Mode { AC, EXTENDED };

struct Equilibrium {
  int id = 0;
  int axis = 0;  // 1-based; 0 marks an off-axis node (EXTENDED only)
  double position = 1.0;
};

struct Connection {
  int from = 0;
  int to = 0;
  int dim = 1;
  std::vector<int> subspace;  // sorted, 1-based coordinates
};

// User-declared eigen-direction roles for EXTENDED networks.
struct Roles {
  std::vector<int> radial;
  std::vector<int> contracting;
  std::vector<int> expanding;
  std::vector<int> transverse;
  bool m_point = false;
  std::vector<int> f_long;  // contracting directions that are f-long vectors
  std::vector<int> s_long;  // expanding directions that are s-long vectors
};

struct Network {
  int n = 0;
  std::vector<Equilibrium> equilibria;          // sorted by id
  std::map<int, std::vector<double>> eigenvalues;  // id -> lambda_{j,1..n}
  std::vector<Connection> connections;          // sorted by (from, to)
  Mode mode = Mode::AC;
  std::map<int, Roles> roles;  // EXTENDED only

  double lambda(int j, int k) const;
  const Equilibrium& equilibrium(int id) const;
  bool has_equilibrium(int id) const;
  int axis_of(int id) const { return equilibrium(id).axis; }
  int node_on_axis(int axis) const;  // 0 if no node lies on that axis
  const Connection* find(int from, int to) const;
  bool has_edge(int from, int to) const { return find(from, to) != nullptr; }
  std::vector<int> successors(int id) const;
  std::vector<int> predecessors(int id) const;
  std::vector<int> ids() const;
};

Network parse_network(const nlohmann::json& doc);
Network parse_network_text(const std::string& text);
Network load_network(const std::string& path);

// Throws InvariantError naming the violated invariant and offending ids.
void validate_network(const Network& net);

// Sorts equilibria/connections/subspaces so that serialization is canonical.
void canonicalize(Network& net);

nlohmann::json to_json(const Network& net);
std::string serialize(const Network& net);

std::vector<int> complementary_subspace(const Connection& conn, int n);

const char* mode_name(Mode m);

}  // namespace hetnet
