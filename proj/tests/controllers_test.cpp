#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <set>

#include "hedac/controllers.hpp"
#include "hedac/coverage.hpp"
#include "hedac/errors.hpp"
#include "hedac/motion.hpp"
#include "hedac/scenario.hpp"
#include "hedac/simulation.hpp"
#include "support.hpp"

using namespace hedac;

namespace {

constexpr double pi = std::numbers::pi;

AgentState at(Vec2 z, double theta = 0.0, MotionModel model = MotionModel::kinematic) {
  AgentState a;
  a.z = z;
  a.theta = theta;
  a.model = model;
  a.r_turn = 30.0;
  a.sensor = SensorModel::calibrated(GaussianDisc{10.0}, 316.91);
  return a;
}

ScalarField bump(const GridSpec& g, Vec2 c, double sigma) { return gaussian_prior(g, c, sigma, sigma); }

double angle_between(Vec2 a, Vec2 b) { return std::abs(signed_angle(a, b)); }

}  // namespace

TEST_SUITE("controllers") {

TEST_CASE("hedac steers toward a bump and agrees with a dense solve") {
  const GridSpec g(320, 320, 32, 32);
  const OccurrenceField occ(bump(g, {240, 160}, 12));
  HedacParams p;
  p.solver_tol = 1e-12;
  const std::vector<AgentState> agents{at({120, 160})};
  const HedacResult r = hedac_directions(agents, occ, p, nullptr);
  REQUIRE(r.directions[0]);
  CHECK(angle_between(*r.directions[0], {1, 0}) < 5.0 * pi / 180.0);

  // the same system solved densely, differentiated with the same stencil
  const int n = static_cast<int>(g.size());
  const double ax = p.alpha * 1e6 / (g.dx() * g.dx());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) * p.beta;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const int k = j * g.nx() + i;
      for (auto [ii, jj] : {std::pair{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}) {
        if (ii < 0 || jj < 0 || ii >= g.nx() || jj >= g.ny()) continue;
        A(k, k) += ax;
        A(k, jj * g.nx() + ii) -= ax;
      }
    }
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(occ.current.values().data(), n);
  const Eigen::VectorXd x = A.ldlt().solve(b);
  const ScalarField u(g, std::vector<double>(x.data(), x.data() + n));
  const Vec2 ref = interpolate_gradient(u, agents[0].z);
  CHECK(angle_between(*r.directions[0], ref) < 1e-6);
}

TEST_CASE("hedac with no remaining mass gives no direction") {
  const GridSpec g(100, 100, 20, 20);
  OccurrenceField occ(bump(g, {50, 50}, 10));
  occ.current = ScalarField(g, 0.0);
  const std::vector<AgentState> agents{at({10, 10}), at({70, 30})};
  for (const Heading& h : hedac_directions(agents, occ, HedacParams{}, nullptr).directions) CHECK_FALSE(h);
}

TEST_CASE("hedac mirror symmetry") {
  const GridSpec g(200, 200, 40, 40);
  const OccurrenceField occ(bump(g, {100, 100}, 20));
  const std::vector<AgentState> agents{at({60, 130}), at({140, 130})};
  const HedacResult r = hedac_directions(agents, occ, HedacParams{}, nullptr);
  REQUIRE(r.directions[0]);
  REQUIRE(r.directions[1]);
  CHECK(std::abs(r.directions[0]->x + r.directions[1]->x) < 1e-6);
  CHECK(std::abs(r.directions[0]->y - r.directions[1]->y) < 1e-6);
}

TEST_CASE("hedac reduces presence over a short run") {
  const Scenario s = parse_scenario(test_config(TestId::test1, 0.5, 1));
  const RunMetrics m = run_simulation(s, 3, SimOptions{50});
  CHECK(m.E.back() < m.E.front());
}

TEST_CASE("lawnmower lanes") {
  const GridSpec g(400, 300, 80, 60);
  const ScalarField prior = scale_to_unit_mass(ScalarField(g, 1.0));
  const std::vector<AgentState> fleet{at({0, 0}), at({0, 0}), at({0, 0})};
  const LawnmowerPlan plan(prior, fleet, LawnmowerParams{});
  const double width = effective_width(fleet[0].sensor);
  CHECK(plan.spacing() <= width + 1e-9);
  CHECK(plan.lanes().size() == static_cast<std::size_t>(std::ceil(300.0 / width - 1e-9)));

  std::set<int> seen;
  std::size_t total = 0;
  for (const auto& block : plan.assignment()) {
    CHECK_FALSE(block.empty());
    total += block.size();
    seen.insert(block.begin(), block.end());
  }
  CHECK(total == plan.lanes().size());
  CHECK(seen.size() == plan.lanes().size());

  for (std::size_t k = 1; k < plan.lanes().size(); ++k) {
    CHECK(plan.lanes()[k].start.y - plan.lanes()[k - 1].start.y == doctest::Approx(plan.spacing()));
  }
}

TEST_CASE("lawnmower sweeps alternate and one pass covers the box") {
  const GridSpec g(300, 200, 60, 40);
  const ScalarField prior = scale_to_unit_mass(ScalarField(g, 1.0));
  std::vector<AgentState> agents{at({5, 5}, 0.0, MotionModel::dubins)};
  const LawnmowerPlan plan(prior, agents, LawnmowerParams{});
  std::vector<LawnmowerTrack> tracks;
  CoverageField c(g);
  const double dt = 0.25;
  std::vector<double> lane_heading;
  long last_leg = -1;
  for (int step = 0; step < 20000 && (tracks.empty() || tracks[0].leg < static_cast<long>(plan.lanes().size())); ++step) {
    const std::vector<Heading> d = lawnmower_directions(agents, plan, tracks, dt);
    agents[0] = step_agent(agents[0], d[0], dt, g.domain());
    stamp_coverage(c, agents, dt);
    if (tracks[0].leg != last_leg) {
      last_leg = tracks[0].leg;
      lane_heading.push_back(0.0);
    }
    lane_heading.back() += std::cos(agents[0].theta);
  }
  REQUIRE(lane_heading.size() >= plan.lanes().size());
  for (std::size_t k = 1; k < plan.lanes().size(); ++k) CHECK(lane_heading[k] * lane_heading[k - 1] < 0.0);
  CHECK(c.field.min_value() > 0.0);
}

TEST_CASE("smc basis against a brute-force cosine transform") {
  const GridSpec g(8.0, 6.0, 8, 8);
  Rng rng(41);
  ScalarField f(g);
  for (double& v : f.values()) v = rng.uniform(0, 1);
  const CosineBasis basis(g, 2);
  const std::vector<double> coef = basis.coefficients(f);
  for (int k2 = 0; k2 < 2; ++k2) {
    for (int k1 = 0; k1 < 2; ++k1) {
      const double h = std::sqrt(8.0 * 6.0 / ((k1 ? 2.0 : 1.0) * (k2 ? 2.0 : 1.0)));
      double s = 0.0;
      for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i)
          s += f(i, j) * std::cos(k1 * pi * g.node_x(i) / 8.0) * std::cos(k2 * pi * g.node_y(j) / 6.0) / h;
      CHECK(coef[k2 * 2 + k1] == doctest::Approx(s * g.cell_area()).epsilon(1e-9));
    }
  }
}

TEST_CASE("smc weights decay with wavenumber") {
  for (double s : {0.5, 1.5, 3.0}) {
    CHECK(smc_weight(0, 0, s) == 1.0);
    CHECK(smc_weight(1, 0, s) > smc_weight(1, 1, s));
    CHECK(smc_weight(1, 1, s) > smc_weight(2, 1, s));
    CHECK(smc_weight(3, 4, s) > smc_weight(5, 5, s));
  }
}

TEST_CASE("smc steers toward the less covered half") {
  const GridSpec g(200, 100, 40, 20);
  const ScalarField prior = scale_to_unit_mass(ScalarField(g, 1.0));
  SmcParams p;
  p.k_modes = 10;
  p.use_log_prior = false;
  const SmcModel model(prior, p);
  const OccurrenceField occ(prior);
  CoverageField c(g);
  // uniform goal, no coverage: nothing to correct
  for (const Heading& h : smc_directions(std::vector{at({80, 50})}, occ, c, model)) CHECK_FALSE(h);

  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx() / 2; ++i) c.field(i, j) = 1.0;
  const std::vector<Heading> d = smc_directions(std::vector{at({80, 50}), at({30, 20})}, occ, c, model);
  for (const Heading& h : d) {
    REQUIRE(h);
    CHECK(h->x > 0.0);
  }

  SmcParams one = p;
  one.k_modes = 1;
  const SmcModel flat(prior, one);
  CHECK_FALSE(smc_directions(std::vector{at({30, 20})}, occ, c, flat)[0]);
}

TEST_CASE("rhc fitness matches a hand rollout and picks the mass-ward turn") {
  const GridSpec g(200, 200, 50, 50);
  const OccurrenceField occ(bump(g, {100, 150}, 15));
  RhcParams p;
  p.horizon_steps = 1;
  p.swarm_size = 10;
  p.pso_iters = 5;
  AgentState a = at({100, 100}, 0.0, MotionModel::dubins);
  a.r_turn = 20.0;
  a.v = 20.0;
  const double dt = 1.0;
  const double w = rhc_rate_bound(a, dt);
  RhcPlanner planner(g, p, 5);

  auto oracle = [&](double rate) {
    AgentState s = a;
    s.theta = wrap_angle(s.theta + rate * dt);
    s.z += (s.v * dt) * s.heading();
    CoverageField c(g);
    stamp_coverage(c, std::vector{s}, dt);
    OccurrenceField o = occ;
    update_occurrence(o, c);
    return total_presence(o);
  };
  const std::vector<AgentState> agents{a};
  for (double rate : {w, -w}) {
    const double got = planner.rollout_presence(agents, occ, std::vector{rate}, dt);
    CHECK(got == doctest::Approx(oracle(rate)).epsilon(1e-12));
  }
  CHECK(oracle(w) < oracle(-w));

  const std::vector<Heading> d = planner.plan(agents, occ, dt, 0);
  REQUIRE(d[0]);
  CHECK(d[0]->y > 0.0);
}

TEST_CASE("rhc edge cases") {
  const GridSpec g(200, 200, 40, 40);
  const OccurrenceField occ(bump(g, {120, 80}, 20));
  const std::vector<AgentState> agents{at({50, 50}, 0.3, MotionModel::dubins), at({150, 150}, -2.0)};

  RhcParams none;
  none.pso_iters = 0;
  none.swarm_size = 8;
  none.horizon_steps = 4;
  RhcPlanner quick(g, none, 1);
  for (const Heading& h : quick.plan(agents, occ, 0.5, 0)) {
    REQUIRE(h);
    CHECK(std::abs(norm(*h) - 1.0) < 1e-12);
  }

  RhcParams small = none;
  small.pso_iters = 3;
  small.rng_seed = 77;
  RhcPlanner first(g, small, 9), second(g, small, 9);
  CHECK(first.plan(agents, occ, 0.5, 4) == second.plan(agents, occ, 0.5, 4));

  RhcParams capped = small;
  capped.max_dimensions = 7;
  RhcPlanner too_big(g, capped, 1);
  try {
    too_big.plan(agents, occ, 0.5, 0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "rhc.max_dimensions");
  }
}

TEST_CASE("every controller returns unit directions or none") {
  Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    const Scenario s = testing::random_scenario(rng, 1);
    const OccurrenceField occ(s.prior);
    CoverageField cov(s.grid);
    stamp_coverage(cov, s.fleet, s.dt);
    auto ctrl = make_controller(s.controller, s.prior, s.fleet, s.seed);
    const std::vector<Heading> d = ctrl->directions(ControlContext{s.fleet, occ, cov, s.dt, 0});
    REQUIRE(d.size() == s.fleet.size());
    for (const Heading& h : d) {
      if (h) CHECK(std::abs(norm(*h) - 1.0) <= 1e-12);
    }
  }
}

}
