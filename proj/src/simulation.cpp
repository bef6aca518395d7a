#include "hedac/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "hedac/errors.hpp"
#include "hedac/motion.hpp"

namespace hedac {

namespace {

constexpr std::uint64_t kPoseStream = 0x706f736573ULL;

void record(RunMetrics& m, double t, double E, double D, double seconds, std::span<const AgentState> agents) {
  m.times.push_back(t);
  m.E.push_back(E);
  m.D.push_back(D);
  m.step_seconds.push_back(seconds);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    m.trajectories[a].push_back({agents[a].z.x, agents[a].z.y, agents[a].theta});
  }
}

}  // namespace

RunMetrics run_simulation(const Scenario& s, std::uint64_t seed, const SimOptions& options) {
  RunMetrics m;
  m.seed = seed;
  Rng rng(seed);
  const std::vector<Vec2> targets = sample_targets(s.prior, s.n_targets, rng);
  std::vector<char> detected(targets.size(), 0);
  int n_detected = 0;

  std::vector<AgentState> agents = s.fleet;
  CoverageField coverage(s.grid);
  OccurrenceField occurrence(s.prior);
  std::unique_ptr<Controller> controller = make_controller(s.controller, s.prior, agents, seed);
  const Domain domain = s.grid.domain();
  const double dt = s.dt;
  const double n = targets.empty() ? 1.0 : static_cast<double>(targets.size());

  std::size_t steps = s.steps();
  if (options.max_steps > 0) steps = std::min(steps, options.max_steps);
  m.trajectories.resize(agents.size());
  for (auto& tr : m.trajectories) tr.reserve(steps + 1);
  record(m, 0.0, total_presence(occurrence), 0.0, 0.0, agents);
  if (options.on_snapshot && options.snapshot_every > 0) options.on_snapshot(0, 0.0, occurrence, coverage);

  for (std::size_t step = 0; step < steps; ++step) {
    const ControlContext ctx{agents, occurrence, coverage, dt, step};
    std::vector<Heading> dirs;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      dirs = controller->directions(ctx);
    } catch (const SolverError& e) {
      m.failure = e.what();
      break;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::vector<AgentState> before = options.on_step ? agents : std::vector<AgentState>{};
    for (std::size_t a = 0; a < agents.size(); ++a) agents[a] = step_agent(agents[a], dirs[a], dt, domain);
    if (options.on_step) options.on_step(step, dirs, before, agents);

    const std::vector<NodeRect> touched = stamp_coverage(coverage, agents, dt);
    update_occurrence(occurrence, coverage, touched);
    const double E = total_presence(occurrence);

    const double t = static_cast<double>(step + 1) * dt;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (detected[j]) continue;
      double rate = 0.0;
      for (const AgentState& a : agents) {
        const Vec2 d = targets[j] - a.z;
        const double reach = a.sensor.support_radius();
        if (d.x * d.x + d.y * d.y > reach * reach) continue;
        rate += a.sensor.rate(to_body_frame(targets[j], a.z, a.theta));
      }
      if (rate > 0.0 && rng.bernoulli(-std::expm1(-rate * dt))) {
        detected[j] = 1;
        ++n_detected;
        m.detections.push_back({static_cast<int>(j), t});
      }
    }

    record(m, t, E, n_detected / n, seconds, agents);
    if (options.on_snapshot && options.snapshot_every > 0 && (step + 1) % options.snapshot_every == 0) {
      options.on_snapshot(step + 1, t, occurrence, coverage);
    }
  }
  return m;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) { return derive_seed(base_seed, run); }

void randomize_poses(std::vector<AgentState>& fleet, const Domain& domain, Rng& rng, double margin) {
  const double mx = std::min(margin, 0.25 * domain.width);
  const double my = std::min(margin, 0.25 * domain.height);
  for (AgentState& a : fleet) {
    a.z = {rng.uniform(mx, domain.width - mx), rng.uniform(my, domain.height - my)};
    a.theta = wrap_angle(rng.uniform(-std::numbers::pi, std::numbers::pi));
  }
}

EnsembleResult run_ensemble(const Scenario& s, int n_runs, std::uint64_t base_seed, const EnsembleOptions& options) {
  if (n_runs < 1) throw ConfigError("must be >= 1", "runs");
  EnsembleResult out;
  out.per_run.resize(static_cast<std::size_t>(n_runs));

  int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_runs);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (int k = next++; k < n_runs; k = next++) {
      try {
        const std::uint64_t seed = run_seed(base_seed, static_cast<std::size_t>(k));
        Scenario local = s;
        if (options.randomize_poses) {
          Rng pose_rng(derive_seed(seed, kPoseStream));
          randomize_poses(local.fleet, local.grid.domain(), pose_rng);
        }
        RunMetrics m = run_simulation(local, seed);
        if (!options.keep_trajectories) m.trajectories.clear();
        out.per_run[static_cast<std::size_t>(k)] = std::move(m);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  for (std::size_t k = 0; k < out.per_run.size(); ++k) {
    if (out.per_run[k].failure) {
      throw SolverError("run " + std::to_string(k) + ": " + *out.per_run[k].failure, 0.0, 0);
    }
  }

  const RunMetrics& first = out.per_run.front();
  const std::size_t len = first.samples();
  out.times = first.times;
  out.E_mean.assign(len, 0.0);
  out.D_mean.assign(len, 0.0);
  out.E_min = first.E;
  out.E_max = first.E;
  for (const RunMetrics& r : out.per_run) {
    for (std::size_t i = 0; i < len; ++i) {
      out.E_mean[i] += r.E[i];
      out.D_mean[i] += r.D[i];
      out.E_min[i] = std::min(out.E_min[i], r.E[i]);
      out.E_max[i] = std::max(out.E_max[i], r.E[i]);
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    out.E_mean[i] /= n_runs;
    out.D_mean[i] /= n_runs;
    // keep the mean inside the envelope despite rounding
    out.E_mean[i] = std::clamp(out.E_mean[i], out.E_min[i], out.E_max[i]);
  }
  out.t90 = t90(out.E_mean, out.times);
  return out;
}

std::optional<double> t90(std::span<const double> E, std::span<const double> times, double level) {
  const std::size_t n = std::min(E.size(), times.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (E[i] <= level) {
      if (i == 0) return times[0];
      const double e0 = E[i - 1];
      const double e1 = E[i];
      const double f = e0 == e1 ? 1.0 : (e0 - level) / (e0 - e1);
      return times[i - 1] + f * (times[i] - times[i - 1]);
    }
  }
  return std::nullopt;
}

double benchmark_step(const Scenario& s, std::uint64_t seed, std::size_t steps) {
  SimOptions opt;
  opt.max_steps = std::max<std::size_t>(1, steps);
  const RunMetrics m = run_simulation(s, seed, opt);
  if (m.failure) throw SolverError(*m.failure, 0.0, 0);
  if (m.samples() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i < m.samples(); ++i) sum += m.step_seconds[i];
  return sum / static_cast<double>(m.samples() - 1);
}

Scenario replicate_fleet(const Scenario& base, int n) {
  if (n < 1) throw ConfigError("agent count must be >= 1", "Ns");
  if (base.fleet.empty()) throw ConfigError("scenario has no agent to replicate", "fleet");
  Scenario s = base;
  s.fleet.assign(static_cast<std::size_t>(n), base.fleet.front());
  return s;
}

std::vector<ScaleRow> scalability_study(const Scenario& base, std::span<const int> Ns, int n_runs,
                                        std::uint64_t base_seed, const EnsembleOptions& options) {
  std::vector<ScaleRow> rows;
  EnsembleOptions opt = options;
  opt.keep_trajectories = false;
  for (int n : Ns) {
    const EnsembleResult r = run_ensemble(replicate_fleet(base, n), n_runs, base_seed, opt);
    ScaleRow row;
    row.n_agents = n;
    row.t90 = r.t90;
    if (r.t90) row.T90 = *r.t90 * n;
    rows.push_back(row);
  }
  if (rows.empty()) return rows;
  auto reference = std::find_if(rows.begin(), rows.end(), [](const ScaleRow& r) { return r.n_agents == 1; });
  if (reference == rows.end()) reference = rows.begin();
  const std::optional<double> T1 = reference->T90;
  for (ScaleRow& row : rows) {
    if (T1 && row.T90) row.eta = &row == &*reference ? 1.0 : *T1 / *row.T90;
  }
  return rows;
}

}  // namespace hedac
