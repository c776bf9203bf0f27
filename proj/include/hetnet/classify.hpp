#pragma once

#include <array>
#include <string>
#include <vector>

#include "hetnet/model.hpp"

namespace hetnet {

// Triangle b -> m -> e closed by the short connection b -> e.
struct DeltaClique {
  int b = 0;
  int m = 0;
  int e = 0;
  Connection short_conn;  // b -> e
  Connection f_long;      // b -> m
  Connection s_long;      // m -> e
};

struct Violation {
  std::string kind;
  std::string message;
  std::vector<int> ids;
};

struct AcReport {
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
};

AcReport check_ac(const Network& net);

// Throws IncompleteClique(i, j, k) when a two-expanding node i fails to close.
std::vector<DeltaClique> find_delta_cliques(const Network& net);

// Same detection without throwing; unclosed triples go to `incomplete`.
std::vector<DeltaClique> find_delta_cliques_lenient(const Network& net,
                                                    std::vector<std::array<int, 3>>* incomplete);

// Elementary cycles that use no f-long connection, canonical rotation, sorted.
std::vector<std::vector<int>> find_flong_free_cycles(const Network& net);

enum class StructureCase { I, II };

struct OptionalConnection {
  int from = 0;
  int to = 0;
  std::string pattern;
};

struct StructureDecomposition {
  StructureCase kase = StructureCase::II;
  std::vector<int> base_cycle;
  int J = 0;
  std::vector<std::vector<int>> groups;  // case II: groups[j-1] = [xi_{j,0}, ..., xi_{j,m_j}]
  std::vector<OptionalConnection> optional_connections;
  bool primary = false;
};

// Decomposition relative to one f-long-free base cycle (any rotation accepted).
StructureDecomposition decompose_structure(const Network& net, const std::vector<int>& base_cycle);

// Decomposition relative to the first canonical base cycle.
StructureDecomposition decompose_structure(const Network& net);

// One decomposition per f-long-free cycle; the first is marked primary.
std::vector<StructureDecomposition> decompose_all(const Network& net);

// Edge set generated by the decomposition's compulsory and optional patterns.
std::vector<std::pair<int, int>> expand_structure(const StructureDecomposition& d);

const char* case_name(StructureCase c);

}  // namespace hetnet
