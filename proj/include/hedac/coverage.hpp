#pragma once

#include <span>
#include <vector>

#include "hedac/agent.hpp"
#include "hedac/field.hpp"

namespace hedac {

/// Accumulated detection-rate exposure c(x, t) (dimensionless).
struct CoverageField {
  ScalarField field;

  CoverageField() = default;
  explicit CoverageField(const GridSpec& grid) : field(grid, 0.0) {}
};

/// Target prior m0 and the undetected-target density m = m0 exp(-c).
struct OccurrenceField {
  ScalarField prior;
  ScalarField current;

  OccurrenceField() = default;
  /// Starts with current == prior (no coverage yet).
  explicit OccurrenceField(ScalarField prior_field) : prior(prior_field), current(std::move(prior_field)) {}
};

/// Add gamma_i(r_i(x)) * dt at every node inside each agent's support.
/// Returns the node rectangles that were visited, one per agent.
std::vector<NodeRect> stamp_coverage(CoverageField& c, std::span<const AgentState> agents, double dt);

/// Stamp a single sensor pose into a raw value buffer laid out like `grid`.
NodeRect stamp_sensor(std::vector<double>& values, const GridSpec& grid, const SensorModel& sensor, Vec2 z,
                      double theta, double dt);

/// 1 - exp(-c), pointwise.
ScalarField detection_probability(const CoverageField& c);

/// current = prior * exp(-c) everywhere.
void update_occurrence(OccurrenceField& o, const CoverageField& c);

/// current = prior * exp(-c) only inside `regions`.
void update_occurrence(OccurrenceField& o, const CoverageField& c, std::span<const NodeRect> regions);

/// E(t): total probability that an undetected target remains.
double total_presence(const OccurrenceField& o);

}  // namespace hedac
