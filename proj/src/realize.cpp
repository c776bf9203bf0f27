#include "hetnet/realize.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "hetnet/classify.hpp"

namespace hetnet {

using nlohmann::json;

void VectorField::eval(const State& x, State& dx) const {
  dx.resize(n);
  thread_local State sq;
  sq.resize(n);
  for (int l = 0; l < n; ++l) sq[l] = x[l] * x[l];
  for (int k = 0; k < n; ++k) {
    double s = sigma[k];
    const auto& row = A[k];
    for (int l = 0; l < n; ++l) s += row[l] * sq[l];
    dx[k] = x[k] * s;
  }
}

State VectorField::operator()(const State& x) const {
  State dx;
  eval(x, dx);
  return dx;
}

Rhs VectorField::rhs() const {
  return [this](const State& x, State& dx) { eval(x, dx); };
}

VectorField synthesize_field(const Network& net) {
  if (net.mode != Mode::AC)
    throw Error("NotApplicable", "fields are synthesized for axial networks only; supply a field for role-annotated networks");
  VectorField f;
  f.n = net.n;
  f.sigma.assign(net.n, -1.0);
  f.A.assign(net.n, std::vector<double>(net.n, -1.0));
  for (const auto& eq : net.equilibria) {
    const int a = eq.axis - 1;
    const double radial = net.lambda(eq.id, eq.axis);
    if (radial >= 0)
      throw Error("InconsistentRadial",
                  "radial eigenvalue lambda_{" + std::to_string(eq.id) + "," + std::to_string(eq.axis) +
                      "} is not negative");
    f.sigma[a] = -radial / 2.0;
    f.A[a][a] = -f.sigma[a] / (eq.position * eq.position);
  }
  for (const auto& eq : net.equilibria) {
    const int a = eq.axis - 1;
    const double p2 = eq.position * eq.position;
    for (int k = 0; k < net.n; ++k) {
      if (k == a) continue;
      f.A[k][a] = (net.lambda(eq.id, k + 1) - f.sigma[k]) / p2;
    }
  }
  return f;
}

json field_to_json(const VectorField& f) {
  json doc;
  doc["schema_version"] = "1";
  doc["n"] = f.n;
  doc["sigma"] = f.sigma;
  doc["A"] = f.A;
  return doc;
}

VectorField field_from_json(const json& doc) {
  if (!doc.is_object()) throw Error("SchemaError", "field: expected a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "schema_version" && it.key() != "n" && it.key() != "sigma" && it.key() != "A")
      throw Error("SchemaError", "field: unknown key \"" + it.key() + "\"");
  for (const char* k : {"n", "sigma", "A"})
    if (!doc.contains(k)) throw Error("SchemaError", std::string("field: missing key \"") + k + "\"");
  VectorField f;
  try {
    f.n = doc.at("n").get<int>();
    f.sigma = doc.at("sigma").get<std::vector<double>>();
    f.A = doc.at("A").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error("SchemaError", std::string("field: ") + e.what());
  }
  if (f.n < 1 || static_cast<int>(f.sigma.size()) != f.n || static_cast<int>(f.A.size()) != f.n)
    throw Error("SchemaError", "field: sigma and A must have n entries");
  for (const auto& row : f.A)
    if (static_cast<int>(row.size()) != f.n) throw Error("SchemaError", "field: A must be n x n");
  return f;
}

VectorField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ParseError", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error("ParseError", std::string("malformed JSON: ") + e.what());
  }
  return field_from_json(doc);
}

State equilibrium_point(const Network& net, int id) {
  const Equilibrium& e = net.equilibrium(id);
  if (e.axis < 1) throw Error("NotApplicable", "equilibrium " + std::to_string(id) + " has no axis position");
  State x(net.n, 0.0);
  x[e.axis - 1] = e.position;
  return x;
}

std::optional<std::array<double, 2>> interior_equilibrium(const VectorField& f, int a, int b) {
  const int i = a - 1, j = b - 1;
  const double m11 = f.A[i][i], m12 = f.A[i][j], m21 = f.A[j][i], m22 = f.A[j][j];
  const double det = m11 * m22 - m12 * m21;
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double y1 = (-f.sigma[i] * m22 + f.sigma[j] * m12) / det;
  const double y2 = (-f.sigma[j] * m11 + f.sigma[i] * m21) / det;
  if (y1 > 0 && y2 > 0) return std::array<double, 2>{std::sqrt(y1), std::sqrt(y2)};
  return std::nullopt;
}

bool CertifyReport::pass() const {
  for (const auto& c : connections)
    if (!c.pass) return false;
  return true;
}

namespace {

struct Arrival {
  bool reached = false;
  bool diverged = false;
  double time = 0.0;
  Trajectory traj;
};

Arrival run_to(const VectorField& f, const State& x0, const State& target) {
  IntegratorOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-14;
  auto near = [&](double, const State& x) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - target[i]));
    return m <= kCertifyArrival;
  };
  Arrival a;
  a.traj = integrate(f.rhs(), x0, kCertifyTmax, opt, {}, {}, near);
  a.reached = a.traj.stopped;
  a.diverged = a.traj.diverged;
  a.time = a.traj.final_time;
  return a;
}

void fail(ConnectionCert& c, std::string code, std::string detail) {
  if (c.pass || c.code.empty()) {
    c.code = std::move(code);
    c.detail = std::move(detail);
  }
  c.pass = false;
}

}  // namespace

CertifyReport certify_connections(const VectorField& field, const Network& net) {
  if (net.mode != Mode::AC) throw Error("NotApplicable", "certification needs equilibria on coordinate axes");
  if (field.n != net.n) throw Error("InvariantError", "field dimension does not match the network");
  std::vector<std::array<int, 3>> missing;
  const auto cliques = find_delta_cliques_lenient(net, &missing);
  CertifyReport rep;
  for (const auto& c : net.connections) {
    ConnectionCert cert;
    cert.from = c.from;
    cert.to = c.to;
    cert.dim = c.dim;
    cert.pass = true;
    const State src = equilibrium_point(net, c.from), dst = equilibrium_point(net, c.to);
    const int ab = net.axis_of(c.from), ae = net.axis_of(c.to);

    if (auto w = interior_equilibrium(field, ab, ae)) {
      cert.witness = {(*w)[0], (*w)[1]};
      std::ostringstream os;
      os << "interior equilibrium in the plane of axes " << ab << "," << ae << " at (" << (*w)[0] << ", " << (*w)[1]
         << ")";
      fail(cert, "InteriorEquilibrium", os.str());
    }

    State x0 = src;
    x0[ae - 1] += kCertifyOffset;
    Arrival main;
    try {
      main = run_to(field, x0, dst);
    } catch (const Error& e) {
      fail(cert, e.code(), e.what());
    }
    if (main.diverged) fail(cert, "Diverged", "trajectory left the ball of radius 1e3");
    else if (!main.reached && cert.code.empty())
      fail(cert, "Timeout", "no arrival at equilibrium " + std::to_string(c.to) + " before T_max = 1e4");
    cert.time = main.time;
    cert.polyline.push_back(src);
    for (const auto& x : main.traj.x) cert.polyline.push_back(x);
    cert.polyline.push_back(dst);

    if (c.dim == 2) {
      const DeltaClique* q = nullptr;
      for (const auto& d : cliques)
        if (d.b == c.from && d.e == c.to) q = &d;
      if (!q) {
        fail(cert, "NoClique", "two-dimensional connection is not the short edge of a clique");
      } else {
        const int am = net.axis_of(q->m);
        for (int k = 0; k < 9; ++k) {
          const double th = (k + 1) * (std::numbers::pi / 2) / 10;
          State y = src;
          y[am - 1] += kCertifyOffset * std::cos(th);
          y[ae - 1] += kCertifyOffset * std::sin(th);
          try {
            Arrival a = run_to(field, y, dst);
            if (a.reached) {
              ++cert.fan_converged;
              cert.time = std::max(cert.time, a.time);
            }
          } catch (const Error&) {
          }
        }
        if (cert.fan_converged != 9)
          fail(cert, "WrongTarget",
               std::to_string(9 - cert.fan_converged) + " of 9 fan trajectories did not reach equilibrium " +
                   std::to_string(c.to));
      }
    }
    rep.connections.push_back(std::move(cert));
  }
  return rep;
}

json certify_to_json(const CertifyReport& r) {
  json doc;
  doc["schema_version"] = "1";
  doc["pass"] = r.pass();
  json arr = json::array();
  for (const auto& c : r.connections) {
    json j;
    j["from"] = c.from;
    j["to"] = c.to;
    j["dim"] = c.dim;
    j["status"] = c.pass ? "PASS" : "FAIL";
    if (!c.pass) {
      j["code"] = c.code;
      j["detail"] = c.detail;
    }
    if (!c.witness.empty()) j["witness"] = c.witness;
    j["time"] = c.time;
    if (c.dim == 2) j["fan_converged"] = c.fan_converged;
    j["polyline_points"] = c.polyline.size();
    arr.push_back(j);
  }
  doc["connections"] = arr;
  return doc;
}

}  // namespace hetnet
