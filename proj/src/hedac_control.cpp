#include "hedac/controllers.hpp"

namespace hedac {

HedacResult hedac_directions(std::span<const AgentState> agents, const OccurrenceField& occurrence,
                             const HedacParams& params, const PotentialField* prev) {
  HedacResult out;
  out.u = solve_potential(occurrence.current, params, prev);
  const double eps = degenerate_gradient_threshold(out.u.field);
  out.directions.reserve(agents.size());
  for (const AgentState& a : agents) {
    const Vec2 g = interpolate_gradient(out.u.field, a.z);
    const double len = norm(g);
    if (len <= eps || !std::isfinite(len)) {
      out.directions.emplace_back(std::nullopt);
    } else {
      out.directions.emplace_back(Vec2{g.x / len, g.y / len});
    }
  }
  return out;
}

}  // namespace hedac
