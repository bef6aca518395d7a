#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hedac/coverage.hpp"
#include "hedac/scenario.hpp"

namespace hedac {

struct PoseSample {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  friend bool operator==(const PoseSample&, const PoseSample&) = default;
};

struct Detection {
  int target = 0;
  double time = 0.0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Time series of one run. Sample 0 is the initial state at t = 0; sample k
/// follows control step k. `step_seconds[k]` is the controller wall-clock of
/// step k (0 for the initial sample).
struct RunMetrics {
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<double> E;
  std::vector<double> D;
  std::vector<double> step_seconds;
  std::vector<Detection> detections;
  std::vector<std::vector<PoseSample>> trajectories;  ///< [agent][sample]
  std::optional<std::string> failure;                 ///< set when a solver error stopped the run

  std::size_t samples() const { return times.size(); }
};

using SnapshotHook =
    std::function<void(std::size_t step, double t, const OccurrenceField& occurrence, const CoverageField& coverage)>;

/// Called after every move with the controller output and the fleet before
/// and after the motion step.
using StepHook = std::function<void(std::size_t step, std::span<const Heading> directions,
                                    std::span<const AgentState> before, std::span<const AgentState> after)>;

struct SimOptions {
  std::size_t max_steps = 0;       ///< 0: run to t_end
  std::size_t snapshot_every = 0;  ///< 0: never call `on_snapshot`
  SnapshotHook on_snapshot;
  StepHook on_step;
};

/// One search run. Targets are drawn from the prior with `seed`; the same seed
/// feeds the controller's random streams.
RunMetrics run_simulation(const Scenario& s, std::uint64_t seed, const SimOptions& options = {});

/// Per-run seed used by the ensemble harness.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

/// Uniform poses inside the domain with a `margin` [m] border and uniform
/// headings; the margin shrinks for domains smaller than twice its size.
void randomize_poses(std::vector<AgentState>& fleet, const Domain& domain, Rng& rng, double margin = 50.0);

struct EnsembleOptions {
  int workers = 0;              ///< 0: hardware concurrency
  bool randomize_poses = true;  ///< false keeps the scenario's initial poses
  bool keep_trajectories = true;
};

struct EnsembleResult {
  std::vector<RunMetrics> per_run;
  std::vector<double> times;
  std::vector<double> E_mean;
  std::vector<double> E_min;
  std::vector<double> E_max;
  std::vector<double> D_mean;
  std::optional<double> t90;  ///< nullopt: mean E never reached 0.1
};

/// Runs are independent and seeded by run_seed(base_seed, k); results do not
/// depend on the worker count. Throws SolverError if any run failed.
EnsembleResult run_ensemble(const Scenario& s, int n_runs, std::uint64_t base_seed,
                            const EnsembleOptions& options = {});

/// First time the series reaches `level`, linearly interpolated.
std::optional<double> t90(std::span<const double> E, std::span<const double> times, double level = 0.1);

/// Mean controller wall-clock over the first `steps` control steps [s].
double benchmark_step(const Scenario& s, std::uint64_t seed = 1, std::size_t steps = 100);

struct ScaleRow {
  int n_agents = 0;
  std::optional<double> t90;
  std::optional<double> T90;  ///< t90 * N
  std::optional<double> eta;  ///< T90(1) / T90(N); the first row stands in when N = 1 is absent
};

/// The fleet is replaced by N copies of the base scenario's first agent.
std::vector<ScaleRow> scalability_study(const Scenario& base, std::span<const int> Ns, int n_runs,
                                        std::uint64_t base_seed, const EnsembleOptions& options = {});

/// Base scenario with its fleet replaced by `n` copies of agent 1.
Scenario replicate_fleet(const Scenario& base, int n);

}  // namespace hedac
