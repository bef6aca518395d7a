#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "hedac/agent.hpp"
#include "hedac/coverage.hpp"
#include "hedac/heat_solver.hpp"

namespace hedac {

enum class LaneOrientation { horizontal, vertical };

struct LawnmowerParams {
  /// Distance between lanes [m]; 0 selects the smallest effective sensor
  /// width in the fleet.
  double lane_spacing = 0.0;
  LaneOrientation orientation = LaneOrientation::horizontal;
  /// Return passes run half a spacing off the outbound lanes.
  bool interleave = true;

  void validate() const;
  friend bool operator==(const LawnmowerParams&, const LawnmowerParams&) = default;
};

struct SmcParams {
  int k_modes = 50;         ///< cosine modes per axis
  double exponent = 1.5;    ///< Sobolev weight exponent s in (1 + |k|^2)^-s
  bool use_log_prior = true;
  /// Log-prior goal: max(0, ln(m0 / (log_floor * max m0))).
  double log_floor = 1e-3;

  void validate() const;
  friend bool operator==(const SmcParams&, const SmcParams&) = default;
};

struct RhcParams {
  int horizon_steps = 10;
  int swarm_size = 40;
  int pso_iters = 30;
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  std::uint64_t rng_seed = 0;
  /// Upper bound on agents * horizon_steps (the PSO search dimension).
  int max_dimensions = 256;

  void validate() const;
  friend bool operator==(const RhcParams&, const RhcParams&) = default;
};

using ControllerKind = std::variant<HedacParams, LawnmowerParams, SmcParams, RhcParams>;

std::string_view controller_name(const ControllerKind& kind);

/// Snapshot handed to a controller once per step.
struct ControlContext {
  std::span<const AgentState> agents;
  const OccurrenceField& occurrence;
  const CoverageField& coverage;
  double dt = 0.0;
  std::size_t step = 0;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::vector<Heading> directions(const ControlContext& ctx) = 0;
};

/// Build the controller for one simulation run. `prior` and `fleet` describe
/// the scenario at t = 0; `run_seed` feeds stochastic controllers.
std::unique_ptr<Controller> make_controller(const ControllerKind& kind, const ScalarField& prior,
                                            std::span<const AgentState> fleet, std::uint64_t run_seed);

// ---------------------------------------------------------------------------
// HEDAC

struct HedacResult {
  std::vector<Heading> directions;
  PotentialField u;
};

/// Solve for the potential sourced by the undetected-target density and
/// return the normalized gradient at each agent position.
HedacResult hedac_directions(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                             const HedacParams& params, const PotentialField* prev);

// ---------------------------------------------------------------------------
// Lawnmower

struct Lane {
  Vec2 start;
  Vec2 end;
};

/// Boustrophedon lanes over the bounding box of the prior's support, split
/// into contiguous blocks, one block per agent.
class LawnmowerPlan {
 public:
  LawnmowerPlan(const ScalarField& prior, std::span<const AgentState> fleet, const LawnmowerParams& params);

  const std::vector<Lane>& lanes() const { return lanes_; }
  /// Lanes of the return passes (equal to lanes() without interleaving).
  const std::vector<Lane>& return_lanes() const { return return_lanes_; }
  double spacing() const { return spacing_; }
  /// Lane indices owned by each agent, in sweep order.
  const std::vector<std::vector<int>>& assignment() const { return assignment_; }

 private:
  std::vector<Lane> lanes_;
  std::vector<Lane> return_lanes_;
  std::vector<std::vector<int>> assignment_;
  double spacing_ = 0.0;
};

/// Per-agent progress through its lane block.
struct LawnmowerTrack {
  long leg = 0;         ///< index into the ping-pong lane sequence
  bool reversed = false;  ///< start of the sequence at the block's last lane
  bool flip = false;      ///< first leg runs end -> start
  bool initialized = false;
};

std::vector<Heading> lawnmower_directions(std::span<const AgentState> agents, const LawnmowerPlan& plan,
                                          std::vector<LawnmowerTrack>& tracks, double dt);

// ---------------------------------------------------------------------------
// Spectral multiscale coverage

/// Cosine basis f_k(x) = cos(k1 pi x / W) cos(k2 pi y / H) / h_k on a grid,
/// orthonormal over the domain.
class CosineBasis {
 public:
  CosineBasis(const GridSpec& grid, int k_modes);

  int modes() const { return k_; }
  const GridSpec& grid() const { return grid_; }
  double norm_factor(int k1, int k2) const { return h_[static_cast<std::size_t>(k2) * k_ + k1]; }

  /// Coefficients <field, f_k> by midpoint quadrature, indexed [k2 * K + k1].
  std::vector<double> coefficients(const ScalarField& field) const;

 private:
  GridSpec grid_;
  int k_;
  std::vector<double> cos_x_;  // [k * nx + i]
  std::vector<double> cos_y_;  // [k * ny + j]
  std::vector<double> h_;
};

/// Precomputed SMC state: basis, weights and goal coefficients.
class SmcModel {
 public:
  SmcModel(const ScalarField& prior, const SmcParams& params);

  const CosineBasis& basis() const { return basis_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& goal_coefficients() const { return goal_; }
  const ScalarField& goal() const { return goal_density_; }

 private:
  SmcParams params_;
  CosineBasis basis_;
  ScalarField goal_density_;
  std::vector<double> weights_;
  std::vector<double> goal_;
};

/// Lambda_k = (1 + |k|^2)^-s.
double smc_weight(int k1, int k2, double exponent);

/// Steer each agent down the gradient of sum_k Lambda_k (C_k - G_k) f_k, where
/// C is the normalized coverage and G the goal density.
std::vector<Heading> smc_directions(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                                    const CoverageField& coverage, const SmcModel& model);

// ---------------------------------------------------------------------------
// Receding horizon control with particle swarm optimization

class RhcPlanner {
 public:
  RhcPlanner(const GridSpec& grid, const RhcParams& params, std::uint64_t run_seed);

  /// Best first-step headings for the current state. `step` selects the
  /// random substream so repeated calls on identical state agree.
  std::vector<Heading> plan(std::span<const AgentState> agents, const OccurrenceField& occurrence, double dt,
                            std::size_t step);

  /// Predicted E after rolling all agents forward with the given turn rates
  /// (agent-major: rates[a * horizon + h]).
  double rollout_presence(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                          std::span<const double> rates, double dt);

  const RhcParams& params() const { return params_; }

 private:
  GridSpec grid_;
  RhcParams params_;
  std::uint64_t seed_;
  std::vector<double> previous_best_;
  std::vector<double> scratch_;
  std::vector<std::size_t> touched_;
};

/// Turn-rate bound used by the planner: omega_max, or pi / dt for agents
/// without a turning limit.
double rhc_rate_bound(const AgentState& agent, double dt);

std::vector<Heading> rhc_directions(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                                    RhcPlanner& planner, double dt, std::size_t step);

}  // namespace hedac
