#pragma once

#include <variant>

#include "hedac/field.hpp"

namespace hedac {

/// Axisymmetric Gaussian centered on the agent.
struct GaussianDisc {
  double sigma = 10.0;
  friend bool operator==(const GaussianDisc&, const GaussianDisc&) = default;
};

/// Gaussian centered `offset` meters ahead of the agent along its heading.
struct OffsetGaussian {
  double offset = 10.0;
  double sigma = 10.0;
  friend bool operator==(const OffsetGaussian&, const OffsetGaussian&) = default;
};

/// Ellipse centered `offset` meters ahead, with semi-axes `forward` (along
/// heading) and `lateral`. Rate is flat inside normalized radius
/// 1 - falloff and tapers with a raised cosine to zero at the rim.
struct ForwardEllipse {
  double offset = 15.0;
  double forward = 20.0;
  double lateral = 12.0;
  double falloff = 0.4;
  friend bool operator==(const ForwardEllipse&, const ForwardEllipse&) = default;
};

using SensorShape = std::variant<GaussianDisc, OffsetGaussian, ForwardEllipse>;

/// Detection-rate function gamma(r) in the agent body frame (x forward,
/// y to the left). Peak rate equals `gain` [1/s]; zero beyond support_radius().
class SensorModel {
 public:
  SensorModel() = default;
  SensorModel(SensorShape shape, double gain);

  /// Shape with the gain chosen so that intensity() == target_intensity.
  static SensorModel calibrated(SensorShape shape, double target_intensity);

  const SensorShape& shape() const { return shape_; }
  double gain() const { return gain_; }
  double support_radius() const { return support_radius_; }

  /// gamma(r) for a body-frame offset r.
  double rate(Vec2 r) const;

  friend bool operator==(const SensorModel&, const SensorModel&) = default;

 private:
  SensorShape shape_ = GaussianDisc{};
  double gain_ = 1.0;
  double support_radius_ = 40.0;
};

/// Offset of world point `x` seen from an agent at `z` with heading `theta`,
/// i.e. (x - z) rotated by -theta.
Vec2 to_body_frame(Vec2 x, Vec2 z, double theta);

/// Integral of gamma over its support by midpoint quadrature. Cell size is
/// support_radius / 200, or `max_cell` if smaller.
double intensity(const SensorModel& sensor, double max_cell = 1e300);

/// Lateral extent of the region where gamma >= 10% of its peak.
double effective_width(const SensorModel& sensor);

}  // namespace hedac
