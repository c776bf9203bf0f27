#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/integrator.hpp"
#include "hetnet/model.hpp"

namespace hetnet {

// x_k' = x_k (sigma_k + sum_l A[k][l] x_l^2)
struct VectorField {
  int n = 0;
  std::vector<double> sigma;
  std::vector<std::vector<double>> A;

  void eval(const State& x, State& dx) const;
  State operator()(const State& x) const;
  Rhs rhs() const;
};

VectorField synthesize_field(const Network& net);

nlohmann::json field_to_json(const VectorField& f);
VectorField field_from_json(const nlohmann::json& doc);
VectorField load_field(const std::string& path);

// Coordinates of equilibrium `id` in R^n.
State equilibrium_point(const Network& net, int id);

// Positive root of sigma + A x^2 = 0 restricted to coordinates (a, b), if any.
std::optional<std::array<double, 2>> interior_equilibrium(const VectorField& f, int a, int b);

struct ConnectionCert {
  int from = 0;
  int to = 0;
  int dim = 1;
  bool pass = false;
  std::string code;    // empty on PASS; Timeout, InteriorEquilibrium, WrongTarget, ...
  std::string detail;
  std::vector<double> witness;  // interior equilibrium coordinates (a, b)
  double time = 0.0;            // longest time to reach the target
  int fan_converged = 0;        // 2D connections: fan members reaching the e-point
  std::vector<State> polyline;  // connecting trajectory from source to target
};

struct CertifyReport {
  std::vector<ConnectionCert> connections;
  bool pass() const;
};

inline constexpr double kCertifyOffset = 1e-4;
inline constexpr double kCertifyTmax = 1e4;
inline constexpr double kCertifyArrival = 1e-6;

CertifyReport certify_connections(const VectorField& field, const Network& net);

nlohmann::json certify_to_json(const CertifyReport& r);

}  // namespace hetnet
