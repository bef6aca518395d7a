#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hedac/scenario.hpp"
#include "hedac/simulation.hpp"
#include "support.hpp"

using namespace hedac;

namespace {

Scenario parked_scenario(double dt, int steps, int targets) {
  Scenario s;
  s.name = "parked";
  s.grid = GridSpec(10, 10, 2, 2);
  s.prior_spec = GaussianPrior{{5, 5}, 100, 100};
  s.prior = build_prior(s.grid, s.prior_spec);
  AgentState a;
  a.z = {5, 5};
  a.v = 0.0;
  a.model = MotionModel::kinematic;
  a.sensor = SensorModel(GaussianDisc{1e4}, std::numbers::ln2 / dt);
  s.fleet = {a};
  s.controller = HedacParams{};
  s.dt = dt;
  s.t_end = steps * dt;
  s.n_targets = targets;
  return s;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("no agents leaves everything undetected") {
  Scenario s = parked_scenario(0.5, 20, 100);
  s.fleet.clear();
  const RunMetrics m = run_simulation(s, 1);
  REQUIRE(m.samples() == 21);
  for (std::size_t i = 0; i < m.samples(); ++i) {
    CHECK(m.E[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.D[i] == 0.0);
  }
}

TEST_CASE("parked agent detects geometrically") {
  const double dt = 0.5;
  const int n = 20000;
  const Scenario s = parked_scenario(dt, 12, n);
  const RunMetrics m = run_simulation(s, 7);
  // each step removes half of what is left
  for (std::size_t k = 0; k < m.samples(); ++k) CHECK(m.E[k] == doctest::Approx(std::pow(0.5, k)).epsilon(1e-4));
  double sum = 0.0;
  for (const Detection& d : m.detections) sum += d.time;
  const double undetected = n - static_cast<double>(m.detections.size());
  CHECK(undetected < 20);
  const double mean = sum / m.detections.size();
  CHECK(std::abs(mean - 2 * dt) <= 4 * std::sqrt(2.0) * dt / std::sqrt(double(n)) + 0.01 * dt);
}

TEST_CASE("detections agree with presence over many seeds") {
  const Scenario s = parse_scenario(test_config(TestId::test1, 0.1, 1));
  Scenario small = s;
  small.t_end = 20.0;
  small.n_targets = 200;
  EnsembleOptions opt;
  opt.randomize_poses = true;
  const EnsembleResult r = run_ensemble(small, 200, 99, opt);
  const double p = 1.0 - r.E_mean.back();
  const double sigma = std::sqrt(p * (1 - p) / (200.0 * 200.0));
  CHECK(std::abs(r.D_mean.back() - p) <= 4 * sigma);
}

TEST_CASE("ensemble bookkeeping") {
  Scenario s = parse_scenario(test_config(TestId::test1, 0.1, 2));
  s.t_end = 10.0;
  const EnsembleResult one = run_ensemble(s, 1, 5);
  CHECK(one.E_mean == one.E_min);
  CHECK(one.E_mean == one.E_max);

  EnsembleOptions serial, wide;
  serial.workers = 1;
  wide.workers = 4;
  const EnsembleResult a = run_ensemble(s, 6, 5, serial);
  const EnsembleResult b = run_ensemble(s, 6, 5, wide);
  REQUIRE(a.per_run.size() == b.per_run.size());
  for (std::size_t k = 0; k < a.per_run.size(); ++k) CHECK(testing::same_outcome(a.per_run[k], b.per_run[k]));
  CHECK(a.E_mean == b.E_mean);
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    CHECK(a.E_min[i] <= a.E_mean[i]);
    CHECK(a.E_mean[i] <= a.E_max[i]);
  }

  CHECK(testing::same_outcome(run_simulation(s, 17), run_simulation(s, 17)));
  CHECK_FALSE(testing::same_outcome(run_simulation(s, 17), run_simulation(s, 18)));
}

TEST_CASE("t90 interpolation") {
  std::vector<double> t, E;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(10.0 * i);
    E.push_back(1.0 - 0.001 * t.back());
  }
  REQUIRE(t90(E, t));
  CHECK(*t90(E, t) == doctest::Approx(900.0));
  const std::vector<double> flat(101, 0.5);
  CHECK(*t90(flat, t, 0.6) == 0.0);
  CHECK_FALSE(t90(flat, t));
}

TEST_CASE("scalability reference row") {
  Scenario s = parse_scenario(test_config(TestId::test1, 0.1, 1));
  s.t_end = 120.0;
  const std::vector<int> Ns{1, 2};
  const std::vector<ScaleRow> rows = scalability_study(s, Ns, 2, 3);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].eta);
  CHECK(*rows[0].eta == 1.0);
  CHECK(replicate_fleet(s, 3).fleet.size() == 3);
}

}
