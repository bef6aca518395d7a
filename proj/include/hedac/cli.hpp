#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hedac {

enum class Command { run, ensemble, bench, scale, validate_config };

struct CliInvocation {
  Command command = Command::run;
  std::filesystem::path config_path;
  std::filesystem::path output_dir;
  std::vector<std::string> overrides;  ///< "key=value"
  std::optional<std::uint64_t> seed;
  int workers = 0;
  int runs = 20;
  std::vector<int> Ns{1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20};
  std::vector<std::string> controllers{"lawnmower", "smc", "hedac", "rhc"};
  std::size_t snapshot_every = 0;
  bool force = false;
  bool timing = true;       ///< false writes step_ms as 0 for byte-stable outputs
  bool fixed_poses = false; ///< ensembles keep the configured initial poses
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_solver = 3;

/// Run one command; diagnostics go to `err`, the one-line summary to `out`.
int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// Parse argv and execute.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hedac
