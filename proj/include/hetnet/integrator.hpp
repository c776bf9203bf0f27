#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hetnet {

using State = std::vector<double>;
using Rhs = std::function<void(const State& x, State& dx)>;

enum class EventKind { ENTER, EXIT };

// Max-norm box of half-width `half_width` around `center`.
struct Box {
  int id = 0;
  State center;
  double half_width = 0.1;
};

struct BoxEvent {
  int equilibrium = 0;
  EventKind kind = EventKind::ENTER;
  double time = 0.0;
  State state;
  double frak_d = 0.0;
};

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  double h_max = 1.0;
  double h_min = 1e-14;
  double diverge = 1e3;
  bool record = true;   // keep every accepted step
  double event_tol = 1e-10;
  std::size_t max_steps = 50'000'000;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<State> x;
  std::vector<BoxEvent> events;
  bool diverged = false;
  bool stopped = false;  // the stop predicate fired
  double final_time = 0.0;
  State final_state;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

// Dormand-Prince 5(4) with PI step control and dense output. Box crossings
// are located by bisection on the dense output. `frak` (optional) is
// evaluated at events; `stop` (optional) ends the run after an accepted step.
// Throws Error("StepUnderflow") when the step falls below h_min.
Trajectory integrate(const Rhs& f, State x0, double T, const IntegratorOptions& opt,
                     const std::vector<Box>& boxes = {},
                     const std::function<double(const State&)>& frak = {},
                     const std::function<bool(double, const State&)>& stop = {});

}  // namespace hetnet
