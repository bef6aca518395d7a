#include <algorithm>
#include <cmath>
#include <limits>

#include "hedac/controllers.hpp"
#include "hedac/errors.hpp"

namespace hedac {

void LawnmowerParams::validate() const {
  if (lane_spacing < 0.0 || !std::isfinite(lane_spacing)) {
    throw ConfigError("must be >= 0 (0 = sensor width)", "lawnmower.lane_spacing");
  }
}

LawnmowerPlan::LawnmowerPlan(const ScalarField& prior, std::span<const AgentState> fleet,
                             const LawnmowerParams& params) {
  params.validate();
  const GridSpec& g = prior.spec();

  int imin = g.nx(), imax = -1, jmin = g.ny(), jmax = -1;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (prior(i, j) > 0.0) {
        imin = std::min(imin, i);
        imax = std::max(imax, i);
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
      }
    }
  }
  if (imax < 0) throw DegeneratePriorError("lawnmower needs a prior with positive mass");
  const double x0 = imin * g.dx(), x1 = (imax + 1) * g.dx();
  const double y0 = jmin * g.dy(), y1 = (jmax + 1) * g.dy();

  double width = params.lane_spacing;
  if (width == 0.0) {
    width = std::numeric_limits<double>::infinity();
    for (const AgentState& a : fleet) width = std::min(width, effective_width(a.sensor));
    if (!std::isfinite(width) || width <= 0.0) width = std::min(x1 - x0, y1 - y0);
  }

  const bool horizontal = params.orientation == LaneOrientation::horizontal;
  const double across = horizontal ? y1 - y0 : x1 - x0;
  const int agents = std::max<int>(1, static_cast<int>(fleet.size()));
  const int n = std::max(agents, static_cast<int>(std::ceil(across / width - 1e-9)));
  spacing_ = across / n;

  // lane ends stay half a sensor width inside the domain
  const double inset = 0.5 * width;
  auto clip = [inset](double v, double hi) { return std::clamp(v, std::min(inset, hi / 2), std::max(hi - inset, hi / 2)); };
  const double lo = horizontal ? y0 : x0;
  const double hi = lo + across;
  auto make_lane = [&](double c) -> Lane {
    if (horizontal) return {{clip(x0, g.width()), c}, {clip(x1, g.width()), c}};
    return {{c, clip(y0, g.height())}, {c, clip(y1, g.height())}};
  };
  for (int k = 0; k < n; ++k) {
    const double c = lo + (k + 0.5) * spacing_;
    lanes_.push_back(make_lane(c));
    const double shifted = params.interleave ? std::min(c + 0.5 * spacing_, hi - 0.25 * spacing_) : c;
    return_lanes_.push_back(make_lane(shifted));
  }

  assignment_.resize(fleet.size());
  for (int a = 0; a < static_cast<int>(fleet.size()); ++a) {
    for (int k = a * n / agents; k < (a + 1) * n / agents; ++k) assignment_[a].push_back(k);
  }
}

namespace {

/// Position in a 0,1,...,k-1,k-1,...,1,0,0,1,... sequence: every lane is
/// swept once per pass in each direction.
int ping_pong(long leg, int k) {
  const long period = 2L * k;
  const long m = leg % period;
  return static_cast<int>(m < k ? m : period - 1 - m);
}

}  // namespace

std::vector<Heading> lawnmower_directions(std::span<const AgentState> agents, const LawnmowerPlan& plan,
                                          std::vector<LawnmowerTrack>& tracks, double dt) {
  tracks.resize(agents.size());
  std::vector<Heading> out;
  out.reserve(agents.size());
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const AgentState& agent = agents[a];
    const std::vector<int>& block = a < plan.assignment().size() ? plan.assignment()[a] : std::vector<int>{};
    if (block.empty()) {
      out.emplace_back(std::nullopt);
      continue;
    }
    const int k = static_cast<int>(block.size());
    LawnmowerTrack& t = tracks[a];

    auto leg_ends = [&](long leg) {
      const int pos = ping_pong(leg, k);
      const auto& lanes = (leg / k) % 2 == 0 ? plan.lanes() : plan.return_lanes();
      const Lane& lane = lanes[block[t.reversed ? k - 1 - pos : pos]];
      const bool backwards = ((leg % 2) == 1) != t.flip;
      return backwards ? std::pair{lane.end, lane.start} : std::pair{lane.start, lane.end};
    };

    if (!t.initialized) {
      // start at whichever end of the block is closest
      double best = std::numeric_limits<double>::infinity();
      for (bool reversed : {false, true}) {
        for (bool flip : {false, true}) {
          const Lane& lane = plan.lanes()[block[reversed ? k - 1 : 0]];
          const Vec2 entry = flip ? lane.end : lane.start;
          const double d = norm(entry - agent.z);
          if (d < best) {
            best = d;
            t.reversed = reversed;
            t.flip = flip;
          }
        }
      }
      t.initialized = true;
    }

    const double capture = agent.v * dt;
    const double lookahead = std::max(4.0 * capture, std::min(agent.r_turn, plan.spacing()));
    Vec2 dir{};
    for (int guard = 0; guard < 4; ++guard) {
      const auto [from, to] = leg_ends(t.leg);
      const Vec2 along = to - from;
      const double length = norm(along);
      const Vec2 u = length > 0.0 ? (1.0 / length) * along : Vec2{1.0, 0.0};
      const double s = dot(agent.z - from, u);
      if (s >= length - capture) {
        ++t.leg;
        continue;
      }
      const Vec2 carrot = from + std::min(std::max(s, 0.0) + lookahead, length) * u;
      const Vec2 d = carrot - agent.z;
      const double len = norm(d);
      dir = len > 1e-9 ? (1.0 / len) * d : u;
      break;
    }
    if (norm(dir) == 0.0) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(dir);
    }
  }
  return out;
}

}  // namespace hedac
