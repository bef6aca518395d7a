#pragma once

#include <cmath>
#include <numbers>

#include "hedac/scenario.hpp"
#include "hedac/simulation.hpp"

namespace hedac::testing {

inline SensorShape random_shape(Rng& rng) {
  switch (static_cast<int>(rng.uniform() * 3)) {
    case 0: return GaussianDisc{rng.uniform(3.0, 12.0)};
    case 1: return OffsetGaussian{rng.uniform(0.0, 10.0), rng.uniform(3.0, 10.0)};
    default: return ForwardEllipse{rng.uniform(0.0, 10.0), rng.uniform(5.0, 15.0), rng.uniform(4.0, 12.0), 0.4};
  }
}

inline AgentState random_agent(Rng& rng, const Domain& d) {
  AgentState a;
  a.z = {rng.uniform(0.0, d.width), rng.uniform(0.0, d.height)};
  a.theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
  a.v = rng.uniform(5.0, 25.0);
  a.r_turn = rng.uniform(5.0, 40.0);
  a.model = rng.bernoulli(0.5) ? MotionModel::dubins : MotionModel::kinematic;
  a.sensor = SensorModel::calibrated(random_shape(rng), rng.uniform(50.0, 800.0));
  return a;
}

inline PriorSpec random_prior(Rng& rng, double w, double h) {
  const double s = std::min(w, h);
  switch (static_cast<int>(rng.uniform() * 3)) {
    case 0:
      return GaussianPrior{{rng.uniform(0.2 * w, 0.8 * w), rng.uniform(0.2 * h, 0.8 * h)}, rng.uniform(0.1, 0.4) * w,
                           rng.uniform(0.1, 0.4) * h};
    case 1: {
      CircleSet set;
      const int n = 1 + static_cast<int>(rng.uniform() * 3);
      for (int k = 0; k < n; ++k) {
        set.minuends.push_back({{rng.uniform(0.3 * w, 0.7 * w), rng.uniform(0.3 * h, 0.7 * h)}, rng.uniform(0.15, 0.3) * s});
      }
      if (rng.bernoulli(0.5)) set.subtrahends.push_back({set.minuends[0].center, 0.3 * set.minuends[0].radius});
      return set;
    }
    default: {
      RoadNetwork net;
      net.sigma = rng.uniform(0.03, 0.1) * s;
      const int n = 1 + static_cast<int>(rng.uniform() * 3);
      for (int k = 0; k < n; ++k) {
        net.segments.push_back({{rng.uniform(0.0, w), rng.uniform(0.0, h)}, {rng.uniform(0.0, w), rng.uniform(0.0, h)}});
      }
      return net;
    }
  }
}

inline ControllerKind random_controller(Rng& rng) {
  switch (static_cast<int>(rng.uniform() * 4)) {
    case 0: {
      HedacParams p;
      p.alpha = rng.uniform(0.005, 0.05);
      p.beta = rng.uniform(1.0, 8.0);
      p.length_scale = 1000.0;
      if (rng.bernoulli(0.3)) p.preconditioner = Preconditioner::jacobi;
      return p;
    }
    case 1: {
      LawnmowerParams p;
      p.orientation = rng.bernoulli(0.5) ? LaneOrientation::horizontal : LaneOrientation::vertical;
      return p;
    }
    case 2: {
      SmcParams p;
      p.k_modes = 2 + static_cast<int>(rng.uniform() * 12);
      p.use_log_prior = rng.bernoulli(0.5);
      return p;
    }
    default: {
      RhcParams p;
      p.horizon_steps = 1 + static_cast<int>(rng.uniform() * 4);
      p.swarm_size = 4 + static_cast<int>(rng.uniform() * 6);
      p.pso_iters = static_cast<int>(rng.uniform() * 4);
      p.rng_seed = rng.next();
      return p;
    }
  }
}

/// Small randomized scenario covering every prior kind, motion model, sensor
/// family and controller; `steps` control steps long.
inline Scenario random_scenario(Rng& rng, int steps = 40) {
  Scenario s;
  s.name = "random";
  const double w = rng.uniform(80.0, 300.0);
  const double h = rng.uniform(80.0, 300.0);
  s.grid = GridSpec(w, h, 12 + static_cast<int>(rng.uniform() * 29), 12 + static_cast<int>(rng.uniform() * 29));
  s.prior_spec = random_prior(rng, w, h);
  s.prior = build_prior(s.grid, s.prior_spec);
  const int n = 1 + static_cast<int>(rng.uniform() * 4);
  for (int k = 0; k < n; ++k) s.fleet.push_back(random_agent(rng, s.grid.domain()));
  s.controller = random_controller(rng);
  s.dt = rng.uniform(0.2, 1.0);
  s.t_end = steps * s.dt;
  s.n_targets = 50 + static_cast<int>(rng.uniform() * 250);
  s.seed = rng.next();
  return s;
}

/// Metrics with wall-clock fields removed.
inline bool same_outcome(const RunMetrics& a, const RunMetrics& b) {
  return a.times == b.times && a.E == b.E && a.D == b.D && a.detections == b.detections &&
         a.trajectories == b.trajectories && a.failure == b.failure;
}

}  // namespace hedac::testing
