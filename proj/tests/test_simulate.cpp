#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "hetnet/simulate.hpp"
#include "support.hpp"

using namespace hetnet;
using testing_support::load;

namespace {

struct Setup {
  Network net;
  VectorField f;
  CertifyReport cert;
  explicit Setup(const std::string& name) : net(load(name)), f(synthesize_field(net)), cert(certify_connections(f, net)) {}
};

ExperimentConfig small(int n) {
  ExperimentConfig c;
  c.n_samples = n;
  c.T_max = 300;
  return c;
}

}  // namespace

TEST_CASE("complementary distance") {
  Network net = load("ex51.json");
  CHECK(frak_distance({0.9, 0.0, 0.0, 1e-4}, net) == 0.0);
  CHECK(frak_distance({0.9, 0.01, 0.02, 0.03}, net) == doctest::Approx(0.02));
}

TEST_CASE("max_distance refines with the mesh and bounds the complementary distance") {
  Setup s("ex51.json");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    State x(4);
    for (auto& v : x) v = u(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double mesh : {0.4, 0.2, 0.1, 0.05, 0.025}) {
      const double d = max_distance(x, s.net, s.cert, mesh);
      CHECK(d <= prev + 1e-15);
      CHECK(frak_distance(x, s.net) <= d + mesh);
      prev = d;
    }
  }
}

TEST_CASE("max_distance needs certified polylines") {
  Network net = load("ex51.json");
  CHECK_THROWS_AS(max_distance({1, 0, 0, 0}, net, CertifyReport{}, 0.1), Error);
}

TEST_CASE("geometric mean of ENTER ratios") {
  CHECK_FALSE(geometric_mean_ratio({}).has_value());
  CHECK_FALSE(geometric_mean_ratio({0.1}).has_value());
  CHECK(*geometric_mean_ratio({1.0, 0.5, 0.25}) == doctest::Approx(0.5));
  CHECK(*geometric_mean_ratio({1.0, 0.0}) == 0.0);
}

TEST_CASE("bad experiment configurations") {
  Setup s("ex51.json");
  ExperimentConfig c = small(1);
  c.epsilon = 0.5;
  CHECK_THROWS_AS(stability_experiment(s.f, s.net, s.cert, c), Error);
  c = small(0);
  CHECK_THROWS_AS(stability_experiment(s.f, s.net, s.cert, c), Error);
}

TEST_CASE("stable and violating instantiations separate") {
  Setup good("ex51.json"), bad("ex51_violating.json");
  auto r = stability_experiment(good.f, good.net, good.cert, small(8));
  CHECK(r.aggregate == Aggregate::EMPIRICALLY_STABLE);
  auto q = stability_experiment(bad.f, bad.net, bad.cert, small(8));
  CHECK(q.aggregate != Aggregate::EMPIRICALLY_STABLE);
  CHECK(q.escaped > 0);
}

TEST_CASE("experiments are reproducible for a fixed seed") {
  Setup s("ex52.json");
  auto a = experiment_to_json(stability_experiment(s.f, s.net, s.cert, small(4)));
  auto b = experiment_to_json(stability_experiment(s.f, s.net, s.cert, small(4)));
  CHECK(a.dump() == b.dump());
  ExperimentConfig c = small(4);
  c.seed = 2;
  auto d = experiment_to_json(stability_experiment(s.f, s.net, s.cert, c));
  CHECK(a.dump() != d.dump());
}

TEST_CASE("CSV and SVG export") {
  Setup s("ex51.json");
  ExperimentConfig c = small(1);
  c.keep_samples = true;
  auto r = stability_experiment(s.f, s.net, s.cert, c);
  REQUIRE(r.trajectories.size() == 1);
  const auto dir = std::filesystem::temp_directory_path() / "hetnet_sim_test";
  std::filesystem::create_directories(dir);
  write_trajectory_csv((dir / "t.csv").string(), r.trajectories[0], 4);
  write_enter_svg((dir / "t.svg").string(), r.trajectories[0]);
  const std::string csv = testing_support::read_text((dir / "t.csv").string());
  CHECK(csv.rfind("time,x1,x2,x3,x4,frak_d", 0) == 0);
  CHECK(testing_support::read_text((dir / "t.svg").string()).find("<svg") != std::string::npos);
}
