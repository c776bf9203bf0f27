#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetnet/integrator.hpp"
#include "hetnet/model.hpp"

using namespace hetnet;

namespace {

double decay_error(double rtol) {
  IntegratorOptions opt;
  opt.rtol = rtol;
  opt.atol = rtol * 1e-3;
  auto tr = integrate([](const State& x, State& dx) { dx = {-x[0]}; }, {1.0}, 1.0, opt);
  return std::abs(tr.final_state[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("exponential decay is accurate and converges with rtol") {
  const double e6 = decay_error(1e-6), e9 = decay_error(1e-9);
  CHECK(e6 < 1e-5);
  CHECK(e9 < 1e-8);
  CHECK(e6 / e9 >= 100.0);
}

TEST_CASE("harmonic oscillator over several periods") {
  IntegratorOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  const double T = 20 * M_PI;
  auto tr = integrate([](const State& x, State& dx) { dx = {x[1], -x[0]}; }, {1.0, 0.0}, T, opt);
  CHECK(tr.final_time == doctest::Approx(T));
  CHECK(std::abs(tr.final_state[0] - 1.0) < 1e-7);
  CHECK(std::abs(tr.final_state[1]) < 1e-7);
  CHECK(tr.t.size() == tr.x.size());
}

TEST_CASE("box events are located on the dense output") {
  IntegratorOptions opt;
  Box b;
  b.id = 7;
  b.center = {2.0};
  b.half_width = 0.5;
  auto tr = integrate([](const State&, State& dx) { dx = {1.0}; }, {0.0}, 4.0, opt, {b},
                      [](const State& x) { return x[0]; });
  REQUIRE(tr.events.size() == 2);
  CHECK(tr.events[0].kind == EventKind::ENTER);
  CHECK(tr.events[0].equilibrium == 7);
  CHECK(tr.events[0].time == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(tr.events[1].kind == EventKind::EXIT);
  CHECK(tr.events[1].time == doctest::Approx(2.5).epsilon(1e-8));
  CHECK(tr.events[0].frak_d == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("blow-up is flagged as divergence") {
  IntegratorOptions opt;
  auto tr = integrate([](const State& x, State& dx) { dx = {x[0] * x[0]}; }, {1.0}, 2.0, opt);
  CHECK(tr.diverged);
  CHECK(tr.final_time < 1.0);
}

TEST_CASE("stop predicate ends the run") {
  IntegratorOptions opt;
  auto tr = integrate([](const State&, State& dx) { dx = {1.0}; }, {0.0}, 10.0, opt, {}, {},
                      [](double, const State& x) { return x[0] > 3.0; });
  CHECK(tr.stopped);
  CHECK(tr.final_time < 10.0);
}

TEST_CASE("step limit is an error") {
  IntegratorOptions opt;
  opt.max_steps = 3;
  opt.h_max = 1e-3;
  try {
    integrate([](const State& x, State& dx) { dx = {-x[0]}; }, {1.0}, 1.0, opt);
    FAIL("expected StepLimit");
  } catch (const Error& e) {
    CHECK(e.code() == "StepLimit");
  }
}
