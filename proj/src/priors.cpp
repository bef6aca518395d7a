#include <algorithm>
#include <cmath>
#include <numbers>

#include "hedac/errors.hpp"
#include "hedac/scenario.hpp"

namespace hedac {

bool CircleSet::contains(Vec2 p) const {
  auto inside = [p](const Circle& c) { return norm(p - c.center) <= c.radius; };
  return std::any_of(minuends.begin(), minuends.end(), inside) &&
         std::none_of(subtrahends.begin(), subtrahends.end(), inside);
}

ScalarField gaussian_prior(const GridSpec& grid, Vec2 center, double sigma_x, double sigma_y) {
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) throw ConfigError("gaussian sigma must be positive", "prior.sigma");
  ScalarField f(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    const double ry = (grid.node_y(j) - center.y) / sigma_y;
    for (int i = 0; i < grid.nx(); ++i) {
      const double rx = (grid.node_x(i) - center.x) / sigma_x;
      f(i, j) = std::exp(-0.5 * (rx * rx + ry * ry));
    }
  }
  return scale_to_unit_mass(f);
}

ScalarField region_prior(const GridSpec& grid, const CircleSet& circles) {
  for (const auto* list : {&circles.minuends, &circles.subtrahends}) {
    for (const Circle& c : *list) {
      if (!(c.radius > 0.0)) throw ConfigError("circle radius must be positive", "prior.circles");
    }
  }
  ScalarField f(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) f(i, j) = circles.contains(grid.node(i, j)) ? 1.0 : 0.0;
  }
  return scale_to_unit_mass(f);
}

ScalarField road_prior(const GridSpec& grid, const RoadNetwork& net, double max_spacing) {
  if (!(net.sigma > 0.0)) throw ConfigError("road sigma must be positive", "prior.sigma");
  if (max_spacing <= 0.0) max_spacing = net.sigma / 4.0;
  const double sigma = net.sigma;
  const double kernel_norm = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  const double reach = 6.0 * sigma;
  ScalarField f(grid);
  for (const RoadSegment& seg : net.segments) {
    const Vec2 along = seg.end - seg.start;
    const double length = norm(along);
    if (!(length > 0.0)) throw ConfigError("road segment has zero length", "prior.segments");
    const int pieces = std::max(1, static_cast<int>(std::ceil(length / max_spacing)));
    const double weight = length / pieces;
    for (int p = 0; p < pieces; ++p) {
      const Vec2 w = seg.start + ((p + 0.5) / pieces) * along;
      const NodeRect box = nodes_near(grid, w, reach);
      for (int j = box.j0; j <= box.j1; ++j) {
        const double dy = grid.node_y(j) - w.y;
        for (int i = box.i0; i <= box.i1; ++i) {
          const double dx = grid.node_x(i) - w.x;
          f(i, j) += weight * kernel_norm * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
      }
    }
  }
  return scale_to_unit_mass(f);
}

ScalarField build_prior(const GridSpec& grid, const PriorSpec& spec) {
  return std::visit(
      [&](const auto& p) -> ScalarField {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianPrior>) {
          return gaussian_prior(grid, p.center, p.sigma_x, p.sigma_y);
        } else if constexpr (std::is_same_v<T, CircleSet>) {
          return region_prior(grid, p);
        } else {
          return road_prior(grid, p);
        }
      },
      spec);
}

std::vector<Vec2> sample_targets(const ScalarField& prior, int n, Rng& rng) {
  std::vector<Vec2> out;
  if (n <= 0) return out;
  const GridSpec& g = prior.spec();
  std::vector<double> cdf(g.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cdf.size(); ++k) {
    acc += std::max(0.0, prior[k]);
    cdf[k] = acc;
  }
  if (!(acc > 0.0)) throw DegeneratePriorError("cannot sample targets from an empty prior");
  out.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
      --it;
      while (it != cdf.begin() && *it == *(it - 1)) --it;
    }
    const std::size_t k = static_cast<std::size_t>(it - cdf.begin());
    const int i = static_cast<int>(k % static_cast<std::size_t>(g.nx()));
    const int j = static_cast<int>(k / static_cast<std::size_t>(g.nx()));
    const double x = (i + rng.uniform()) * g.dx();
    const double y = (j + rng.uniform()) * g.dy();
    out.push_back({x, y});
  }
  return out;
}

}  // namespace hedac
