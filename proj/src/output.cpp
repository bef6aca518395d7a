#include "hedac/output.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hedac/errors.hpp"

namespace hedac {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string optional_text(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

double mean_step_seconds(const RunMetrics& m) {
  if (m.samples() < 2) return 0.0;
  const double sum = std::accumulate(m.step_seconds.begin() + 1, m.step_seconds.end(), 0.0);
  return sum / static_cast<double>(m.samples() - 1);
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

OutputDir::OutputDir(std::filesystem::path root, bool force) : root_(std::move(root)) {
  namespace fs = std::filesystem;
  if (fs::exists(root_)) {
    if (!fs::is_directory(root_)) throw ConfigError("output path exists and is not a directory", "out");
    if (!fs::is_empty(root_) && !force) {
      throw ConfigError("output directory '" + root_.string() + "' is not empty (use --force)", "out");
    }
  } else {
    fs::create_directories(root_);
  }
}

void OutputDir::write(const std::string& name, const std::string& kind, const std::string& text) {
  const std::filesystem::path p = root_ / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
  files_.push_back({{"path", name}, {"kind", kind}});
}

void OutputDir::write_field(const std::string& name, const std::string& kind, const ScalarField& f) {
  std::ostringstream text;
  write_snapshot(text, f);
  write(name, kind, text.str());
}

void OutputDir::finish(const json& meta) {
  json manifest = meta;
  manifest["files"] = files_;
  const std::filesystem::path p = root_ / "manifest.json";
  std::ofstream out(p, std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw Error("cannot write " + p.string());
}

std::string run_csv(const RunMetrics& m, bool timing) {
  std::string s = "t,E,D,step_ms\n";
  for (std::size_t i = 0; i < m.samples(); ++i) {
    s += format_number(m.times[i]) + ',' + format_number(m.E[i]) + ',' + format_number(m.D[i]) + ',' +
         format_number(timing ? m.step_seconds[i] * 1e3 : 0.0) + '\n';
  }
  return s;
}

std::string trajectory_csv(const RunMetrics& m, std::size_t agent) {
  std::string s = "t,x,y,theta\n";
  const auto& tr = m.trajectories.at(agent);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    s += format_number(m.times[i]) + ',' + format_number(tr[i].x) + ',' + format_number(tr[i].y) + ',' +
         format_number(tr[i].theta) + '\n';
  }
  return s;
}

std::string envelope_csv(const EnsembleResult& r) {
  std::string s = "t,E_mean,E_min,E_max,D_mean\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    s += format_number(r.times[i]) + ',' + format_number(r.E_mean[i]) + ',' + format_number(r.E_min[i]) + ',' +
         format_number(r.E_max[i]) + ',' + format_number(r.D_mean[i]) + '\n';
  }
  return s;
}

std::string scale_csv(const std::vector<ScaleRow>& rows) {
  std::string s = "N,t90,T90,eta\n";
  for (const ScaleRow& r : rows) {
    s += std::to_string(r.n_agents) + ',' + optional_text(r.t90) + ',' + optional_text(r.T90) + ',' +
         optional_text(r.eta) + '\n';
  }
  return s;
}

json run_summary(const RunMetrics& m, bool timing) {
  json j;
  j["seed"] = m.seed;
  j["t90"] = optional_number(t90(m.E, m.times));
  j["final_E"] = m.E.empty() ? 1.0 : m.E.back();
  j["final_D"] = m.D.empty() ? 0.0 : m.D.back();
  j["detections"] = m.detections.size();
  j["mean_step_ms"] = timing ? mean_step_seconds(m) * 1e3 : 0.0;
  j["failure"] = m.failure ? json(*m.failure) : json(nullptr);
  return j;
}

json ensemble_summary(const EnsembleResult& r, bool timing) {
  json j;
  j["runs"] = r.per_run.size();
  j["t90"] = optional_number(r.t90);
  j["final_E_mean"] = r.E_mean.empty() ? 1.0 : r.E_mean.back();
  j["final_D_mean"] = r.D_mean.empty() ? 0.0 : r.D_mean.back();
  j["times"] = r.times;
  j["E_mean"] = r.E_mean;
  j["E_min"] = r.E_min;
  j["E_max"] = r.E_max;
  j["D_mean"] = r.D_mean;
  json runs = json::array();
  for (const RunMetrics& m : r.per_run) runs.push_back(run_summary(m, timing));
  j["per_run"] = runs;
  return j;
}

json scale_summary(const std::vector<ScaleRow>& rows) {
  json table = json::array();
  for (const ScaleRow& r : rows) {
    table.push_back({{"N", r.n_agents},
                     {"t90", optional_number(r.t90)},
                     {"T90", optional_number(r.T90)},
                     {"eta", optional_number(r.eta)}});
  }
  return {{"scalability", table}};
}

}  // namespace hedac
