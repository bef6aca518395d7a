#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hedac/agent.hpp"
#include "hedac/controllers.hpp"
#include "hedac/field.hpp"
#include "hedac/rng.hpp"

namespace hedac {

struct GaussianPrior {
  Vec2 center;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  friend bool operator==(const GaussianPrior&, const GaussianPrior&) = default;
};

struct Circle {
  Vec2 center;
  double radius = 1.0;
  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Region (union of minuends) minus (union of subtrahends).
struct CircleSet {
  std::vector<Circle> minuends;
  std::vector<Circle> subtrahends;
  bool contains(Vec2 p) const;
  friend bool operator==(const CircleSet&, const CircleSet&) = default;
};

struct RoadSegment {
  Vec2 start;
  Vec2 end;
  friend bool operator==(const RoadSegment&, const RoadSegment&) = default;
};

struct RoadNetwork {
  std::vector<RoadSegment> segments;
  double sigma = 100.0;
  friend bool operator==(const RoadNetwork&, const RoadNetwork&) = default;
};

using PriorSpec = std::variant<GaussianPrior, CircleSet, RoadNetwork>;

/// Normalized anisotropic Gaussian evaluated at the nodes.
ScalarField gaussian_prior(const GridSpec& grid, Vec2 center, double sigma_x, double sigma_y);

/// Uniform density over the circle region (node-center membership), normalized.
ScalarField region_prior(const GridSpec& grid, const CircleSet& circles);

/// Sum over segments of the line integral of a Gaussian kernel, normalized.
/// Segments are sampled at arclength spacing <= max_spacing (default sigma / 4).
ScalarField road_prior(const GridSpec& grid, const RoadNetwork& net, double max_spacing = 0.0);

ScalarField build_prior(const GridSpec& grid, const PriorSpec& spec);

/// Cell drawn with probability proportional to node value, then a uniform
/// position inside that cell.
std::vector<Vec2> sample_targets(const ScalarField& prior, int n, Rng& rng);

struct Scenario {
  std::string name;
  GridSpec grid;
  PriorSpec prior_spec;
  ScalarField prior;  ///< normalized m0, derived from prior_spec
  std::vector<AgentState> fleet;
  ControllerKind controller;
  double dt = 0.25;
  double t_end = 600.0;
  int n_targets = 1000;
  std::uint64_t seed = 1;

  std::size_t steps() const;
  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class TestId { test1, test2, test3 };

TestId parse_test_id(std::string_view name);
std::string_view test_name(TestId id);

/// Ordered dotted-path overrides, e.g. {"hedac.beta", 4}.
using Overrides = std::vector<std::pair<std::string, nlohmann::json>>;

/// Configuration document for one of the three reference scenarios.
/// `scale` multiplies every geometric length (domain, prior geometry, initial
/// poses) and the cell counts; `n_agents` > 0 replaces the fleet with copies
/// of agent 1.
nlohmann::json test_config(TestId id, double scale = 1.0, int n_agents = 0);

/// Reference scenario with overrides. The special keys "scale" and
/// "n_agents" are applied to the layout before the dotted overrides.
Scenario build_test_scenario(TestId id, const Overrides& overrides = {});

/// Reconstructed island geometry and road network for tests 2 and 3.
CircleSet default_test2_circles();
RoadNetwork default_test3_roads();

// ---------------------------------------------------------------------------
// Configuration documents

/// Parse a fully-expanded configuration object. Relative geometry file paths
/// resolve against `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Self-contained document (geometry inlined) with parse(serialize(s)) == s.
nlohmann::json serialize_scenario(const Scenario& s);

/// Expand a document that names a "base" reference scenario, then apply the
/// overrides; documents without "base" are taken as-is.
nlohmann::json expand_config(const nlohmann::json& doc, const Overrides& overrides = {});

/// Read, expand, override and parse a configuration file. Syntax errors are
/// reported with line and column.
Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides = {});

/// Set the value at a dotted path ("fleet.0.v"), creating objects as needed.
void apply_override(nlohmann::json& doc, std::string_view path, const nlohmann::json& value);

/// "key=value" -> override; the value is read as JSON when it parses,
/// otherwise as a plain string.
std::pair<std::string, nlohmann::json> parse_override(std::string_view assignment);

CircleSet read_circles(std::istream& in);
RoadNetwork read_roads(std::istream& in, double sigma);

}  // namespace hedac
