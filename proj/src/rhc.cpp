#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hedac/controllers.hpp"
#include "hedac/errors.hpp"
#include "hedac/motion.hpp"
#include "hedac/rng.hpp"

namespace hedac {

void RhcParams::validate() const {
  if (horizon_steps < 1) throw ConfigError("must be >= 1", "rhc.horizon_steps");
  if (swarm_size < 1) throw ConfigError("must be >= 1", "rhc.swarm_size");
  if (pso_iters < 0) throw ConfigError("must be >= 0", "rhc.pso_iters");
  if (max_dimensions < 1) throw ConfigError("must be >= 1", "rhc.max_dimensions");
}

double rhc_rate_bound(const AgentState& agent, double dt) {
  return std::min(agent.omega_max(), std::numbers::pi / dt);
}

RhcPlanner::RhcPlanner(const GridSpec& grid, const RhcParams& params, std::uint64_t run_seed)
    : grid_(grid), params_(params), seed_(derive_seed(params.rng_seed, run_seed)), scratch_(grid.size(), 0.0) {
  params_.validate();
}

double RhcPlanner::rollout_presence(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                                    std::span<const double> rates, double dt) {
  const int horizon = params_.horizon_steps;
  const Domain domain = grid_.domain();
  const double cell = grid_.cell_area();
  touched_.clear();
  for (std::size_t a = 0; a < agents.size(); ++a) {
    AgentState s = agents[a];
    for (int h = 0; h < horizon; ++h) {
      s.theta = wrap_angle(s.theta + rates[a * horizon + h] * dt);
      s.z += (s.v * dt) * s.heading();
      s = enforce_boundary(s, domain);
      const NodeRect box = stamp_sensor(scratch_, grid_, s.sensor, s.z, s.theta, dt);
      for (int j = box.j0; j <= box.j1; ++j) {
        for (int i = box.i0; i <= box.i1; ++i) touched_.push_back(grid_.index(i, j));
      }
    }
  }
  // E_pred = E - sum m (1 - exp(-dc)); each touched node counted once
  double gain = 0.0;
  for (std::size_t k : touched_) {
    const double dc = scratch_[k];
    if (dc != 0.0) {
      gain += occurrence.current[k] * -std::expm1(-dc);
      scratch_[k] = 0.0;
    }
  }
  return total_presence(occurrence) - gain * cell;
}

std::vector<Heading> RhcPlanner::plan(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                                      double dt, std::size_t step) {
  const int horizon = params_.horizon_steps;
  const std::size_t dims = agents.size() * static_cast<std::size_t>(horizon);
  if (dims > static_cast<std::size_t>(params_.max_dimensions)) {
    throw ConfigError("agents * horizon_steps = " + std::to_string(dims) + " exceeds the cap of " +
                          std::to_string(params_.max_dimensions),
                      "rhc.max_dimensions");
  }
  if (agents.empty()) return {};

  std::vector<double> bound(dims);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const double b = rhc_rate_bound(agents[a], dt);
    for (int h = 0; h < horizon; ++h) bound[a * horizon + h] = b;
  }

  Rng rng(derive_seed(seed_, step));
  const int swarm = params_.swarm_size;
  std::vector<std::vector<double>> pos(swarm, std::vector<double>(dims));
  std::vector<std::vector<double>> vel(swarm, std::vector<double>(dims));
  for (int p = 0; p < swarm; ++p) {
    for (std::size_t d = 0; d < dims; ++d) {
      pos[p][d] = rng.uniform(-bound[d], bound[d]);
      vel[p][d] = rng.uniform(-bound[d], bound[d]) * 0.5;
    }
  }
  // seed one particle with last step's plan shifted by one step
  if (previous_best_.size() == dims) {
    for (std::size_t a = 0; a < agents.size(); ++a) {
      for (int h = 0; h < horizon; ++h) {
        const std::size_t src = a * horizon + std::min(h + 1, horizon - 1);
        pos[0][a * horizon + h] = std::clamp(previous_best_[src], -bound[a * horizon + h], bound[a * horizon + h]);
      }
    }
  }

  std::vector<std::vector<double>> best_pos = pos;
  std::vector<double> best_fit(swarm);
  std::vector<double> global = pos[0];
  double global_fit = std::numeric_limits<double>::infinity();
  for (int p = 0; p < swarm; ++p) {
    best_fit[p] = rollout_presence(agents, occurrence, pos[p], dt);
    if (best_fit[p] < global_fit) {
      global_fit = best_fit[p];
      global = pos[p];
    }
  }

  for (int it = 0; it < params_.pso_iters; ++it) {
    for (int p = 0; p < swarm; ++p) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double v = params_.inertia * vel[p][d] + params_.cognitive * r1 * (best_pos[p][d] - pos[p][d]) +
                   params_.social * r2 * (global[d] - pos[p][d]);
        v = std::clamp(v, -bound[d], bound[d]);
        vel[p][d] = v;
        pos[p][d] = std::clamp(pos[p][d] + v, -bound[d], bound[d]);
      }
      const double fit = rollout_presence(agents, occurrence, pos[p], dt);
      if (fit < best_fit[p]) {
        best_fit[p] = fit;
        best_pos[p] = pos[p];
      }
      if (fit < global_fit) {
        global_fit = fit;
        global = pos[p];
      }
    }
  }

  previous_best_ = global;
  std::vector<Heading> out;
  out.reserve(agents.size());
  for (std::size_t a = 0; a < agents.size(); ++a) {
    out.emplace_back(unit_from_angle(agents[a].theta + global[a * horizon] * dt));
  }
  return out;
}

std::vector<Heading> rhc_directions(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                                    RhcPlanner& planner, double dt, std::size_t step) {
  return planner.plan(agents, occurrence, dt, step);
}

}  // namespace hedac
