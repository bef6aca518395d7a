#include "hedac/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "hedac/errors.hpp"
#include "hedac/output.hpp"
#include "hedac/scenario.hpp"
#include "hedac/simulation.hpp"

namespace hedac {

using nlohmann::json;

namespace {

std::string_view command_name(Command c) {
  switch (c) {
    case Command::run: return "run";
    case Command::ensemble: return "ensemble";
    case Command::bench: return "bench";
    case Command::scale: return "scale";
    default: return "validate-config";
  }
}

Overrides collect_overrides(const CliInvocation& inv) {
  Overrides ov;
  for (const std::string& s : inv.overrides) ov.push_back(parse_override(s));
  if (inv.seed) ov.emplace_back("seed", *inv.seed);
  return ov;
}

std::string time_text(const std::optional<double>& t) {
  if (!t) return "not reached";
  std::ostringstream s;
  s.precision(1);
  s << std::fixed << *t << " s";
  return s.str();
}

json meta(const CliInvocation& inv, const Scenario& s) {
  return {{"command", std::string(command_name(inv.command))},
          {"scenario", s.name},
          {"controller", std::string(controller_name(s.controller))},
          {"agents", s.fleet.size()},
          {"seed", s.seed}};
}

void write_common(OutputDir& dir, const Scenario& s) {
  dir.write("effective_config", "config", serialize_scenario(s).dump(2) + "\n");
  dir.write_field("prior.txt", "prior", s.prior);
}

void write_run_files(OutputDir& dir, const RunMetrics& m, std::size_t k, bool timing) {
  dir.write("run_" + std::to_string(k) + ".csv", "run", run_csv(m, timing));
  for (std::size_t a = 0; a < m.trajectories.size(); ++a) {
    dir.write("traj_" + std::to_string(k) + "_" + std::to_string(a) + ".csv", "trajectory", trajectory_csv(m, a));
  }
}

int do_run(const CliInvocation& inv, const Scenario& s, std::ostream& out, std::ostream& err) {
  OutputDir dir(inv.output_dir, inv.force);
  write_common(dir, s);
  SimOptions opt;
  opt.snapshot_every = inv.snapshot_every;
  if (inv.snapshot_every > 0) {
    opt.on_snapshot = [&dir](std::size_t step, double, const OccurrenceField& occ, const CoverageField& cov) {
      dir.write_field("occurrence_" + std::to_string(step) + ".txt", "occurrence", occ.current);
      dir.write_field("coverage_" + std::to_string(step) + ".txt", "coverage", cov.field);
    };
  }
  const RunMetrics m = run_simulation(s, s.seed, opt);
  write_run_files(dir, m, 0, inv.timing);
  dir.write("summary.json", "summary", run_summary(m, inv.timing).dump(2) + "\n");
  dir.finish(meta(inv, s));
  if (m.failure) {
    err << "solver error: " << *m.failure << "\n";
    return exit_solver;
  }
  out << s.name << " " << controller_name(s.controller) << ": t90 " << time_text(t90(m.E, m.times)) << ", E "
      << m.E.back() << ", D " << m.D.back() << "\n";
  return exit_ok;
}

EnsembleOptions ensemble_options(const CliInvocation& inv) {
  EnsembleOptions opt;
  opt.workers = inv.workers;
  opt.randomize_poses = !inv.fixed_poses;
  return opt;
}

int do_ensemble(const CliInvocation& inv, const Scenario& s, std::ostream& out) {
  OutputDir dir(inv.output_dir, inv.force);
  write_common(dir, s);
  const EnsembleResult r = run_ensemble(s, inv.runs, s.seed, ensemble_options(inv));
  for (std::size_t k = 0; k < r.per_run.size(); ++k) write_run_files(dir, r.per_run[k], k, inv.timing);
  dir.write("envelope.csv", "envelope", envelope_csv(r));
  dir.write("summary.json", "summary", ensemble_summary(r, inv.timing).dump(2) + "\n");
  json m = meta(inv, s);
  m["runs"] = inv.runs;
  dir.finish(m);
  out << s.name << " " << controller_name(s.controller) << " x" << inv.runs << ": t90 " << time_text(r.t90)
      << ", mean final E " << r.E_mean.back() << "\n";
  return exit_ok;
}

int do_bench(const CliInvocation& inv, const Scenario& base, std::ostream& out) {
  OutputDir dir(inv.output_dir, inv.force);
  write_common(dir, base);
  json table = json::array();
  std::string csv = "controller,mean_step_ms\n";
  std::ostringstream line;
  line << base.name << " mean step:";
  for (const std::string& name : inv.controllers) {
    Overrides ov = collect_overrides(inv);
    ov.emplace_back("controller.kind", name);
    const Scenario s = load_scenario(inv.config_path, ov);
    const double ms = benchmark_step(s, s.seed) * 1e3;
    table.push_back({{"controller", name}, {"mean_step_ms", ms}});
    csv += name + "," + format_number(ms) + "\n";
    line << " " << name << " " << ms << " ms";
  }
  dir.write("bench.csv", "bench", csv);
  dir.write("summary.json", "summary", json{{"benchmark", table}}.dump(2) + "\n");
  dir.finish(meta(inv, base));
  out << line.str() << "\n";
  return exit_ok;
}

int do_scale(const CliInvocation& inv, const Scenario& s, std::ostream& out) {
  OutputDir dir(inv.output_dir, inv.force);
  write_common(dir, s);
  const std::vector<ScaleRow> rows = scalability_study(s, inv.Ns, inv.runs, s.seed, ensemble_options(inv));
  dir.write("scale.csv", "scale", scale_csv(rows));
  dir.write("summary.json", "summary", scale_summary(rows).dump(2) + "\n");
  json m = meta(inv, s);
  m["runs"] = inv.runs;
  dir.finish(m);
  out << s.name << " scalability:";
  for (const ScaleRow& r : rows) {
    out << " N=" << r.n_agents << " t90 " << time_text(r.t90);
    if (r.eta) out << " eta " << *r.eta;
    out << ";";
  }
  out << "\n";
  return exit_ok;
}

}  // namespace

int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  try {
    const Scenario s = load_scenario(inv.config_path, collect_overrides(inv));
    switch (inv.command) {
      case Command::validate_config:
        out << "ok: " << s.name << ", " << s.fleet.size() << " agents, grid " << s.grid.nx() << "x" << s.grid.ny()
            << ", " << controller_name(s.controller) << "\n";
        return exit_ok;
      case Command::run: return do_run(inv, s, out, err);
      case Command::ensemble: return do_ensemble(inv, s, out);
      case Command::bench: return do_bench(inv, s, out);
      case Command::scale: return do_scale(inv, s, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return exit_solver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_failure;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent probabilistic search simulator"};
  app.require_subcommand(1);
  CliInvocation inv;

  auto common = [&inv](CLI::App* sub, bool writes) {
    sub->add_option("--config", inv.config_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", inv.overrides, "Override a config key, e.g. hedac.beta=4")->take_all();
    sub->add_option("--seed", inv.seed, "Override the scenario seed");
    if (writes) {
      sub->add_option("--out", inv.output_dir, "Output directory")->required();
      sub->add_flag("--force", inv.force, "Allow a non-empty output directory");
      sub->add_flag("--timing,!--no-timing", inv.timing, "Record wall-clock step times (--no-timing writes 0)");
    }
  };

  CLI::App* run = app.add_subcommand("run", "Single simulation");
  common(run, true);
  run->add_option("--snapshot-every", inv.snapshot_every, "Dump occurrence and coverage fields every M steps");

  CLI::App* ens = app.add_subcommand("ensemble", "Monte-Carlo ensemble");
  common(ens, true);
  ens->add_option("--runs", inv.runs, "Number of runs")->check(CLI::PositiveNumber);
  ens->add_option("--workers", inv.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  ens->add_flag("--fixed-poses", inv.fixed_poses, "Keep the configured initial poses");

  CLI::App* bench = app.add_subcommand("bench", "Mean control-step time");
  common(bench, true);
  bench->add_option("--controllers", inv.controllers, "Controllers to time")->delimiter(',');

  CLI::App* scale = app.add_subcommand("scale", "Scalability study");
  common(scale, true);
  scale->add_option("--Ns", inv.Ns, "Agent counts, e.g. 1,2,4,8")->delimiter(',');
  scale->add_option("--runs", inv.runs, "Runs per agent count")->check(CLI::PositiveNumber);
  scale->add_option("--workers", inv.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  scale->add_flag("--fixed-poses", inv.fixed_poses, "Keep the configured initial poses");

  CLI::App* validate = app.add_subcommand("validate-config", "Parse and check a scenario file");
  common(validate, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  if (run->parsed()) inv.command = Command::run;
  if (ens->parsed()) inv.command = Command::ensemble;
  if (bench->parsed()) inv.command = Command::bench;
  if (scale->parsed()) inv.command = Command::scale;
  if (validate->parsed()) inv.command = Command::validate_config;
  for (int n : inv.Ns) {
    if (n < 1) {
      err << "config error: Ns: agent counts must be >= 1\n";
      return exit_config;
    }
  }
  return execute(inv, out, err);
}

}  // namespace hedac
