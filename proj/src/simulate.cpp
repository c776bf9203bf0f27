#include "hetnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace hetnet {

using nlohmann::json;

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::CONVERGED: return "CONVERGED";
    case Outcome::ESCAPED: return "ESCAPED";
    case Outcome::UNDECIDED: return "UNDECIDED";
  }
  return "?";
}

const char* aggregate_name(Aggregate a) {
  switch (a) {
    case Aggregate::EMPIRICALLY_STABLE: return "EMPIRICALLY_STABLE";
    case Aggregate::EMPIRICALLY_UNSTABLE: return "EMPIRICALLY_UNSTABLE";
    case Aggregate::MIXED: return "MIXED";
  }
  return "?";
}

Trajectory integrate(const VectorField& field, const State& x0, double T, double rtol, double atol) {
  IntegratorOptions opt;
  opt.rtol = rtol;
  opt.atol = atol;
  return integrate(field.rhs(), x0, T, opt);
}

double frak_distance(const State& x, const Network& net) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : net.connections) {
    double m = 0.0;
    for (int k : complementary_subspace(c, net.n)) m = std::max(m, std::abs(x[k - 1]));
    best = std::min(best, m);
  }
  return best;
}

namespace {

double euclid(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void require_polylines(const CertifyReport& cert) {
  if (cert.connections.empty()) throw Error("PolylineMissing", "connections have not been certified");
  for (const auto& c : cert.connections)
    if (c.polyline.size() < 2)
      throw Error("PolylineMissing", "no connecting trajectory for " + std::to_string(c.from) + "->" +
                                         std::to_string(c.to));
}

}  // namespace

double max_distance(const State& x, const Network& net, const CertifyReport& cert, double mesh) {
  if (!(mesh > 0)) throw Error("InvariantError", "mesh must be positive");
  require_polylines(cert);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : net.equilibria) best = std::min(best, euclid(x, equilibrium_point(net, e.id)));
  State p(x.size());
  for (const auto& c : cert.connections) {
    for (std::size_t s = 0; s + 1 < c.polyline.size(); ++s) {
      const State& a = c.polyline[s];
      const State& b = c.polyline[s + 1];
      const double len = euclid(a, b);
      std::uint64_t pieces = 1;
      while (len / static_cast<double>(pieces) > mesh && pieces < (std::uint64_t{1} << 40)) pieces *= 2;
      for (std::uint64_t i = 0; i <= pieces; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(pieces);
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = a[k] + u * (b[k] - a[k]);
        best = std::min(best, euclid(x, p));
      }
    }
  }
  return best;
}

std::optional<double> geometric_mean_ratio(const std::vector<double>& v) {
  if (v.size() < 2) return std::nullopt;
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] <= 0.0) continue;
    if (v[i + 1] <= 0.0) return 0.0;
    sum += std::log(v[i + 1] / v[i]);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return std::exp(sum / count);
}

namespace {

struct Sampler {
  const Network& net;
  const CertifyReport& cert;
  const ExperimentConfig& cfg;
  std::mt19937_64 rng;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

  bool outside_boxes(const State& x) const {
    for (const auto& e : net.equilibria) {
      const State p = equilibrium_point(net, e.id);
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - p[i]));
      if (m < cfg.delta_tilde) return false;
    }
    return true;
  }

  State point_on(const std::vector<State>& poly) {
    std::vector<double> cum{0.0};
    for (std::size_t s = 0; s + 1 < poly.size(); ++s) cum.push_back(cum.back() + euclid(poly[s], poly[s + 1]));
    const double target = uniform(0.0, cum.back());
    std::size_t s = std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
    s = std::clamp<std::size_t>(s, 1, poly.size() - 1);
    const double seg = cum[s] - cum[s - 1];
    const double u = seg > 0 ? (target - cum[s - 1]) / seg : 0.0;
    State x(poly[s - 1].size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = poly[s - 1][k] + u * (poly[s][k] - poly[s - 1][k]);
    return x;
  }

  // Returns the start point and the index of the chosen connection.
  std::pair<State, std::size_t> draw() {
    const std::size_t C = cert.connections.size();
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const std::size_t ci = std::uniform_int_distribution<std::size_t>(0, C - 1)(rng);
      const Connection& conn = net.connections[ci];
      const auto comp = complementary_subspace(conn, net.n);
      State x = point_on(cert.connections[ci].polyline);
      if (comp.empty() || !outside_boxes(x)) continue;
      for (int k : comp) x[k - 1] = cfg.epsilon * uniform(0.5, 1.0);
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, comp.size() - 1)(rng);
      x[comp[pick] - 1] = cfg.epsilon;
      for (int it = 0; it < 8; ++it) {
        const double d = frak_distance(x, net);
        if (!(d > 0) || std::abs(d - cfg.epsilon) <= 1e-12 * cfg.epsilon) break;
        for (int k : comp) x[k - 1] *= cfg.epsilon / d;
      }
      return {x, ci};
    }
    throw Error("SamplingFailed", "could not place an initial point outside the equilibrium boxes");
  }
};

}  // namespace

ExperimentReport stability_experiment(const VectorField& field, const Network& net, const CertifyReport& cert,
                                      const ExperimentConfig& cfg) {
  if (!(cfg.epsilon > 0) || !(cfg.epsilon < cfg.delta_tilde))
    throw Error("ConfigError", "epsilon must satisfy 0 < epsilon < delta_tilde");
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& a : net.equilibria)
    for (const auto& b : net.equilibria)
      if (a.id < b.id) min_gap = std::min(min_gap, euclid(equilibrium_point(net, a.id), equilibrium_point(net, b.id)));
  if (!(cfg.delta_tilde < min_gap / 2)) throw Error("ConfigError", "delta_tilde must be below half the equilibrium spacing");
  if (cfg.n_samples < 1 || !(cfg.T_max > 0)) throw Error("ConfigError", "need n_samples >= 1 and T_max > 0");
  require_polylines(cert);

  ExperimentReport rep;
  rep.config = cfg;
  std::vector<Box> boxes;
  for (const auto& e : net.equilibria) boxes.push_back({e.id, equilibrium_point(net, e.id), cfg.delta_tilde});
  Sampler sampler{net, cert, cfg, std::mt19937_64(cfg.seed)};
  auto frak = [&](const State& x) { return frak_distance(x, net); };

  for (int s = 0; s < cfg.n_samples; ++s) {
    TrajectoryReport tr;
    tr.index = s;
    auto [x0, ci] = sampler.draw();
    tr.x0 = x0;
    tr.connection_from = net.connections[ci].from;
    tr.connection_to = net.connections[ci].to;
    IntegratorOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    opt.record = cfg.keep_samples;
    bool escaped = false;
    auto stop = [&](double, const State& x) {
      if (frak(x) > cfg.escape_threshold) escaped = true;
      return escaped;
    };
    try {
      Trajectory t = integrate(field.rhs(), x0, cfg.T_max, opt, boxes, frak, stop);
      for (const auto& ev : t.events) {
        if (ev.kind != EventKind::ENTER) continue;
        tr.enter_frak_d.push_back(ev.frak_d);
        tr.enter_sequence.push_back(ev.equilibrium);
      }
      tr.diverged = t.diverged;
      tr.final_time = t.final_time;
      tr.final_frak_d = frak(t.final_state);
      if (cfg.keep_samples) {
        tr.t = std::move(t.t);
        tr.x = std::move(t.x);
        for (const auto& x : tr.x) tr.frak_d.push_back(frak(x));
      }
      for (double d : tr.enter_frak_d) tr.sup_enter_frak_d = std::max(tr.sup_enter_frak_d, d);
      tr.geometric_mean_ratio = geometric_mean_ratio(tr.enter_frak_d);
      if (escaped || tr.diverged || tr.sup_enter_frak_d > cfg.escape_threshold) tr.outcome = Outcome::ESCAPED;
      else if (tr.final_frak_d < cfg.epsilon / 100 && tr.sup_enter_frak_d < cfg.escape_threshold)
        tr.outcome = Outcome::CONVERGED;
      else tr.outcome = Outcome::UNDECIDED;
    } catch (const Error& e) {
      tr.error = e.code() + ": " + e.what();
      tr.outcome = Outcome::UNDECIDED;
    }
    switch (tr.outcome) {
      case Outcome::CONVERGED: ++rep.converged; break;
      case Outcome::ESCAPED: ++rep.escaped; break;
      case Outcome::UNDECIDED: ++rep.undecided; break;
    }
    rep.trajectories.push_back(std::move(tr));
  }
  if (rep.converged == cfg.n_samples) rep.aggregate = Aggregate::EMPIRICALLY_STABLE;
  else if (rep.escaped > 0) rep.aggregate = Aggregate::EMPIRICALLY_UNSTABLE;
  else rep.aggregate = Aggregate::MIXED;
  return rep;
}

json experiment_to_json(const ExperimentReport& r) {
  json doc;
  doc["schema_version"] = "1";
  doc["config"] = {{"epsilon", r.config.epsilon},
                   {"delta_tilde", r.config.delta_tilde},
                   {"T_max", r.config.T_max},
                   {"n_samples", r.config.n_samples},
                   {"seed", r.config.seed},
                   {"escape_threshold", r.config.escape_threshold},
                   {"rtol", r.config.rtol},
                   {"atol", r.config.atol}};
  doc["aggregate"] = aggregate_name(r.aggregate);
  doc["counts"] = {{"CONVERGED", r.converged}, {"ESCAPED", r.escaped}, {"UNDECIDED", r.undecided}};
  json arr = json::array();
  for (const auto& t : r.trajectories) {
    json j;
    j["index"] = t.index;
    j["connection"] = {t.connection_from, t.connection_to};
    j["outcome"] = outcome_name(t.outcome);
    j["sup_enter_frak_d"] = t.sup_enter_frak_d;
    j["final_frak_d"] = t.final_frak_d;
    j["geometric_mean_ratio"] = t.geometric_mean_ratio ? json(*t.geometric_mean_ratio) : json(nullptr);
    j["enter_events"] = t.enter_frak_d.size();
    j["enter_sequence"] = t.enter_sequence;
    j["final_time"] = t.final_time;
    if (t.diverged) j["diverged"] = true;
    if (!t.error.empty()) j["error"] = t.error;
    arr.push_back(j);
  }
  doc["trajectories"] = arr;
  return doc;
}

void write_trajectory_csv(const std::string& path, const TrajectoryReport& t, int n) {
  std::ofstream out(path);
  if (!out) throw Error("IOError", "cannot write " + path);
  out << "time";
  for (int k = 1; k <= n; ++k) out << ",x" << k;
  out << ",frak_d\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < t.t.size(); ++i) {
    out << t.t[i];
    for (double v : t.x[i]) out << "," << v;
    out << "," << (i < t.frak_d.size() ? t.frak_d[i] : 0.0) << "\n";
  }
}

void write_enter_svg(const std::string& path, const TrajectoryReport& t) {
  std::ofstream out(path);
  if (!out) throw Error("IOError", "cannot write " + path);
  const double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < t.enter_frak_d.size(); ++i)
    if (t.enter_frak_d[i] > 0) pts.push_back({static_cast<double>(i), std::log10(t.enter_frak_d[i])});
  double ymin = -1, ymax = 0;
  if (!pts.empty()) {
    ymin = ymax = pts.front().second;
    for (auto& p : pts) {
      ymin = std::min(ymin, p.second);
      ymax = std::max(ymax, p.second);
    }
  }
  ymin = std::floor(ymin) - 1;
  ymax = std::ceil(ymax) + 1;
  const double xmax = std::max<double>(1.0, static_cast<double>(t.enter_frak_d.size()) - 1);
  auto sx = [&](double x) { return L + (W - L - R) * x / xmax; };
  auto sy = [&](double y) { return T + (H - T - B) * (ymax - y) / (ymax - ymin); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 8));
  for (int y = static_cast<int>(ymin); y <= static_cast<int>(ymax); y += ystep)
    out << "<text x=\"" << L - 8 << "\" y=\"" << sy(y) + 4 << "\" font-size=\"11\" text-anchor=\"end\">1e" << y
        << "</text>\n";
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">ENTER event index</text>\n";
  out << "<text x=\"14\" y=\"" << (T + H - B) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 "
      << (T + H - B) / 2 << ")\" text-anchor=\"middle\">complementary distance</text>\n";
  out << "<text x=\"" << L << "\" y=\"18\" font-size=\"12\">trajectory " << t.index << " ("
      << outcome_name(t.outcome) << ")</text>\n";
  if (!pts.empty()) {
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (auto& p : pts) out << sx(p.first) << "," << sy(p.second) << " ";
    out << "\"/>\n";
    for (auto& p : pts)
      out << "<circle cx=\"" << sx(p.first) << "\" cy=\"" << sy(p.second) << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace hetnet
