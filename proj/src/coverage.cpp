#include "hedac/coverage.hpp"

#include <cmath>

#include "hedac/errors.hpp"

namespace hedac {

NodeRect stamp_sensor(std::vector<double>& values, const GridSpec& grid, const SensorModel& sensor, Vec2 z,
                      double theta, double dt) {
  const double radius = sensor.support_radius();
  const NodeRect box = nodes_near(grid, z, radius);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int j = box.j0; j <= box.j1; ++j) {
    const double dy = grid.node_y(j) - z.y;
    for (int i = box.i0; i <= box.i1; ++i) {
      const double dx = grid.node_x(i) - z.x;
      const double rate = sensor.rate({c * dx + s * dy, -s * dx + c * dy});
      if (rate > 0.0) values[grid.index(i, j)] += rate * dt;
    }
  }
  return box;
}

std::vector<NodeRect> stamp_coverage(CoverageField& c, std::span<const AgentState> agents, double dt) {
  std::vector<NodeRect> touched;
  touched.reserve(agents.size());
  const GridSpec& grid = c.field.spec();
  for (const AgentState& a : agents) {
    touched.push_back(stamp_sensor(c.field.values(), grid, a.sensor, a.z, a.theta, dt));
  }
  return touched;
}

ScalarField detection_probability(const CoverageField& c) {
  ScalarField p(c.field.spec());
  for (std::size_t k = 0; k < p.values().size(); ++k) p[k] = -std::expm1(-c.field[k]);
  return p;
}

void update_occurrence(OccurrenceField& o, const CoverageField& c) {
  if (!(o.prior.spec() == c.field.spec()) || !(o.current.spec() == c.field.spec())) {
    throw ShapeError("occurrence and coverage grids differ");
  }
  for (std::size_t k = 0; k < o.prior.values().size(); ++k) o.current[k] = o.prior[k] * std::exp(-c.field[k]);
}

void update_occurrence(OccurrenceField& o, const CoverageField& c, std::span<const NodeRect> regions) {
  const GridSpec& grid = c.field.spec();
  if (!(o.prior.spec() == grid) || !(o.current.spec() == grid)) {
    throw ShapeError("occurrence and coverage grids differ");
  }
  for (const NodeRect& r : regions) {
    for (int j = r.j0; j <= r.j1; ++j) {
      for (int i = r.i0; i <= r.i1; ++i) {
        const std::size_t k = grid.index(i, j);
        o.current[k] = o.prior[k] * std::exp(-c.field[k]);
      }
    }
  }
}

double total_presence(const OccurrenceField& o) { return integrate(o.current); }

}  // namespace hedac
