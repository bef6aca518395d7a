#include "hedac/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hedac/errors.hpp"

namespace hedac {

namespace {

constexpr double kGaussianReach = 4.0;  // support radius in standard deviations

double shape_value(const SensorShape& shape, Vec2 r) {
  return std::visit(
      [r](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianDisc>) {
          return std::exp(-(r.x * r.x + r.y * r.y) / (2.0 * s.sigma * s.sigma));
        } else if constexpr (std::is_same_v<T, OffsetGaussian>) {
          const double ax = r.x - s.offset;
          return std::exp(-(ax * ax + r.y * r.y) / (2.0 * s.sigma * s.sigma));
        } else {
          const double ex = (r.x - s.offset) / s.forward;
          const double ey = r.y / s.lateral;
          const double rho = std::sqrt(ex * ex + ey * ey);
          if (rho >= 1.0) return 0.0;
          const double flat = 1.0 - s.falloff;
          if (rho <= flat) return 1.0;
          return 0.5 * (1.0 + std::cos(std::numbers::pi * (rho - flat) / s.falloff));
        }
      },
      shape);
}

double reach(const SensorShape& shape) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianDisc>) {
          if (!(s.sigma > 0.0)) throw ConfigError("sensor sigma must be positive");
          return kGaussianReach * s.sigma;
        } else if constexpr (std::is_same_v<T, OffsetGaussian>) {
          if (!(s.sigma > 0.0)) throw ConfigError("sensor sigma must be positive");
          return std::abs(s.offset) + kGaussianReach * s.sigma;
        } else {
          if (!(s.forward > 0.0) || !(s.lateral > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
          if (!(s.falloff > 0.0 && s.falloff <= 1.0)) throw ConfigError("ellipse falloff must be in (0, 1]");
          return std::abs(s.offset) + std::max(s.forward, s.lateral);
        }
      },
      shape);
}

}  // namespace

SensorModel::SensorModel(SensorShape shape, double gain)
    : shape_(shape), gain_(gain), support_radius_(reach(shape)) {
  if (!(gain > 0.0) || !std::isfinite(gain)) throw ConfigError("sensor gain must be positive");
}

SensorModel SensorModel::calibrated(SensorShape shape, double target_intensity) {
  if (!(target_intensity > 0.0)) throw ConfigError("target intensity must be positive");
  // intensity is linear in gain, so the root of I(g) - target is one ratio away
  const double unit = intensity(SensorModel(shape, 1.0));
  return SensorModel(shape, target_intensity / unit);
}

double SensorModel::rate(Vec2 r) const {
  if (r.x * r.x + r.y * r.y > support_radius_ * support_radius_) return 0.0;
  return gain_ * shape_value(shape_, r);
}

Vec2 to_body_frame(Vec2 x, Vec2 z, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Vec2 d = x - z;
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

double intensity(const SensorModel& sensor, double max_cell) {
  const double radius = sensor.support_radius();
  const double h_target = std::min(radius / 200.0, max_cell);
  const int n = static_cast<int>(std::ceil(2.0 * radius / h_target));
  const double h = 2.0 * radius / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = -radius + (j + 0.5) * h;
    for (int i = 0; i < n; ++i) {
      sum += sensor.rate({-radius + (i + 0.5) * h, y});
    }
  }
  return sum * h * h;
}

double effective_width(const SensorModel& sensor) {
  const double radius = sensor.support_radius();
  const int n = 800;
  const double h = 2.0 * radius / n;
  const double threshold = 0.1 * sensor.gain();
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int j = 0; j <= n; ++j) {
    const double y = -radius + j * h;
    for (int i = 0; i <= n; ++i) {
      if (sensor.rate({-radius + i * h, y}) >= threshold) {
        if (!found) lo = y;
        hi = y;
        found = true;
        break;
      }
    }
  }
  return found ? hi - lo : 0.0;
}

}  // namespace hedac
