#include "hetnet/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "hetnet/model.hpp"

namespace hetnet {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;  // h shrinks by at most 1/0.2
constexpr double kFacMax = 10.0;

struct Dense {
  State r1, r2, r3, r4, r5;
  void eval(double th, State& y) const {
    const double th1 = 1.0 - th;
    y.resize(r1.size());
    for (std::size_t i = 0; i < r1.size(); ++i)
      y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
  }
};

double box_g(const State& x, const Box& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - b.center[i]));
  return m - b.half_width;
}

double hinit(const Rhs& f, const State& x, const State& f0, const IntegratorOptions& opt, double T) {
  const std::size_t n = x.size();
  double d0 = 0, d1n = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = opt.atol + opt.rtol * std::abs(x[i]);
    d0 += (x[i] / sk) * (x[i] / sk);
    d1n += (f0[i] / sk) * (f0[i] / sk);
  }
  d0 = std::sqrt(d0 / n);
  d1n = std::sqrt(d1n / n);
  double h0 = (d0 < 1e-10 || d1n < 1e-10) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min({h0, opt.h_max, T});
  State x1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) x1[i] = x[i] + h0 * f0[i];
  f(x1, f1);
  double d2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = opt.atol + opt.rtol * std::abs(x[i]);
    d2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double dm = std::max(d1n, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100 * h0, h1, opt.h_max});
}

}  // namespace

Trajectory integrate(const Rhs& f, State x, double T, const IntegratorOptions& opt, const std::vector<Box>& boxes,
                     const std::function<double(const State&)>& frak,
                     const std::function<bool(double, const State&)>& stop) {
  const std::size_t n = x.size();
  Trajectory tr;
  for (double v : x)
    if (!std::isfinite(v)) throw Error("InvariantError", "initial state is not finite");
  if (!(opt.rtol > 0) || !(opt.atol > 0)) throw Error("InvariantError", "rtol and atol must be positive");

  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y(n), y1(n), err(n), probe(n);
  f(x, k1);
  double t = 0.0;
  if (opt.record) {
    tr.t.push_back(t);
    tr.x.push_back(x);
  }
  std::vector<bool> inside(boxes.size());
  for (std::size_t b = 0; b < boxes.size(); ++b) inside[b] = box_g(x, boxes[b]) < 0;

  const double expo1 = 0.2 - kBeta * 0.75;
  double facold = 1e-4;
  bool last_rejected = false;
  double h = T > 0 ? hinit(f, x, k1, opt, T) : 0.0;
  Dense dense;

  while (t < T) {
    if (tr.steps + tr.rejected > opt.max_steps) throw Error("StepLimit", "integrator exceeded the step budget");
    const bool final_step = t + h >= T;
    if (final_step) h = T - t;

    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * a21 * k1[i];
    f(y, k2);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(y, k3);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(y, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(y, k5);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(y, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = x[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(y1, k7);

    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sk = opt.atol + opt.rtol * std::max(std::abs(x[i]), std::abs(y1[i]));
      e += (err[i] / sk) * (err[i] / sk);
    }
    e = std::sqrt(e / n);

    const double fac11 = std::pow(e, expo1);
    if (e <= 1.0) {
      dense.r1 = x;
      dense.r2.resize(n);
      dense.r3.resize(n);
      dense.r4.resize(n);
      dense.r5.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        dense.r2[i] = y1[i] - x[i];
        dense.r3[i] = h * k1[i] - dense.r2[i];
        dense.r4[i] = dense.r2[i] - h * k7[i] - dense.r3[i];
        dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      std::vector<BoxEvent> found;
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        const bool now_inside = box_g(y1, boxes[b]) < 0;
        if (now_inside == inside[b]) continue;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200 && (hi - lo) * h > opt.event_tol; ++it) {
          const double mid = 0.5 * (lo + hi);
          dense.eval(mid, probe);
          if ((box_g(probe, boxes[b]) < 0) == inside[b]) lo = mid;
          else hi = mid;
        }
        BoxEvent ev;
        ev.equilibrium = boxes[b].id;
        ev.kind = now_inside ? EventKind::ENTER : EventKind::EXIT;
        ev.time = t + hi * h;
        dense.eval(hi, ev.state);
        ev.frak_d = frak ? frak(ev.state) : 0.0;
        found.push_back(std::move(ev));
        inside[b] = now_inside;
      }
      std::sort(found.begin(), found.end(), [](const BoxEvent& a, const BoxEvent& b) { return a.time < b.time; });
      for (auto& ev : found) tr.events.push_back(std::move(ev));

      t = final_step ? T : t + h;
      x.swap(y1);
      k1.swap(k7);
      ++tr.steps;
      if (opt.record) {
        tr.t.push_back(t);
        tr.x.push_back(x);
      }
      bool blown = false;
      for (double v : x)
        if (!(std::abs(v) <= opt.diverge)) blown = true;
      if (blown) {
        tr.diverged = true;
        break;
      }
      if (stop && stop(t, x)) {
        tr.stopped = true;
        break;
      }
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      facold = std::max(e, 1e-4);
      last_rejected = false;
      h = std::min(hnew, opt.h_max);
    } else {
      ++tr.rejected;
      last_rejected = true;
      h = h / std::min(1.0 / kFacMin, fac11 / kSafe);
      if (h < opt.h_min)
        throw Error("StepUnderflow", "step size fell below " + std::to_string(opt.h_min) + " at t = " +
                                         std::to_string(t));
    }
  }
  tr.final_time = t;
  tr.final_state = x;
  return tr;
}

}  // namespace hetnet
