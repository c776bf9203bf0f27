#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/integrator.hpp"
#include "hetnet/model.hpp"
#include "hetnet/realize.hpp"

namespace hetnet {

// Linear test problem and field wrappers over the generic integrator.
Trajectory integrate(const VectorField& field, const State& x0, double T, double rtol, double atol);

// min over connections of the max-norm of x on the complementary coordinates.
double frak_distance(const State& x, const Network& net);

// Euclidean distance to the equilibria and to the certified connecting
// polylines, resampled so that no piece is longer than `mesh`.
double max_distance(const State& x, const Network& net, const CertifyReport& cert, double mesh);

struct ExperimentConfig {
  double epsilon = 1e-3;
  double delta_tilde = 0.1;
  double T_max = 500.0;
  int n_samples = 50;
  std::uint64_t seed = 1;
  double escape_threshold = 0.1;
  double rtol = 1e-8;
  double atol = 1e-30;
  bool keep_samples = false;  // store full trajectories for CSV export
};

enum class Outcome { CONVERGED, ESCAPED, UNDECIDED };
enum class Aggregate { EMPIRICALLY_STABLE, EMPIRICALLY_UNSTABLE, MIXED };
const char* outcome_name(Outcome o);
const char* aggregate_name(Aggregate a);

struct TrajectoryReport {
  int index = 0;
  int connection_from = 0;
  int connection_to = 0;
  State x0;
  Outcome outcome = Outcome::UNDECIDED;
  double sup_enter_frak_d = 0.0;
  double final_frak_d = 0.0;
  std::optional<double> geometric_mean_ratio;  // null with fewer than two ENTER events
  std::vector<double> enter_frak_d;
  std::vector<int> enter_sequence;
  bool diverged = false;
  std::string error;
  double final_time = 0.0;
  std::vector<double> t;  // kept when cfg.keep_samples
  std::vector<State> x;
  std::vector<double> frak_d;
};

struct ExperimentReport {
  ExperimentConfig config;
  Aggregate aggregate = Aggregate::MIXED;
  int converged = 0;
  int escaped = 0;
  int undecided = 0;
  std::vector<TrajectoryReport> trajectories;
};

// Geometric mean of successive positive ENTER ratios; 0 once a value drops to 0.
std::optional<double> geometric_mean_ratio(const std::vector<double>& values);

ExperimentReport stability_experiment(const VectorField& field, const Network& net, const CertifyReport& cert,
                                      const ExperimentConfig& cfg);

nlohmann::json experiment_to_json(const ExperimentReport& r);

// Per-trajectory CSV (time, x1..xn, frak_d) and SVG of ENTER-event distances.
void write_trajectory_csv(const std::string& path, const TrajectoryReport& t, int n);
void write_enter_svg(const std::string& path, const TrajectoryReport& t);

}  // namespace hetnet
