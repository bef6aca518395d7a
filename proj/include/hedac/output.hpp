#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hedac/simulation.hpp"

namespace hedac {

/// Collects the files written into one output directory and describes them in
/// manifest.json.
class OutputDir {
 public:
  /// Creates `root` if needed. A non-empty directory is refused unless `force`.
  OutputDir(std::filesystem::path root, bool force);

  const std::filesystem::path& root() const { return root_; }

  /// Write `text` to root/name and list it under `kind`.
  void write(const std::string& name, const std::string& kind, const std::string& text);

  /// Write a field in the snapshot format.
  void write_field(const std::string& name, const std::string& kind, const ScalarField& f);

  /// Writes manifest.json (itself not listed); `meta` is merged at top level.
  void finish(const nlohmann::json& meta);

 private:
  std::filesystem::path root_;
  nlohmann::json files_ = nlohmann::json::array();
};

/// `t,E,D,step_ms`; with `timing` false the step_ms column is written as 0.
std::string run_csv(const RunMetrics& m, bool timing = true);

/// `t,x,y,theta` for one agent.
std::string trajectory_csv(const RunMetrics& m, std::size_t agent);

/// `t,E_mean,E_min,E_max,D_mean`.
std::string envelope_csv(const EnsembleResult& r);

/// `N,t90,T90,eta`, unreached values as NA.
std::string scale_csv(const std::vector<ScaleRow>& rows);

nlohmann::json run_summary(const RunMetrics& m, bool timing = true);
nlohmann::json ensemble_summary(const EnsembleResult& r, bool timing = true);
nlohmann::json scale_summary(const std::vector<ScaleRow>& rows);

/// Shortest round-trip decimal form used by every text output.
std::string format_number(double v);

}  // namespace hedac
