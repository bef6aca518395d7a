#pragma once

#include <limits>
#include <optional>

#include "hedac/field.hpp"
#include "hedac/sensor.hpp"

namespace hedac {

enum class MotionModel { kinematic, dubins };

struct AgentState {
  Vec2 z;               ///< position [m]
  double theta = 0.0;   ///< heading [rad], kept in (-pi, pi]
  double v = 20.0;      ///< speed [m/s]
  double r_turn = 0.0;  ///< minimal turning radius [m]; ignored by the kinematic model
  MotionModel model = MotionModel::dubins;
  SensorModel sensor;

  double omega_max() const {
    if (model == MotionModel::kinematic || r_turn <= 0.0) return std::numeric_limits<double>::infinity();
    return v / r_turn;
  }
  Vec2 heading() const { return unit_from_angle(theta); }

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Desired travel direction for one agent: a unit vector, or nullopt when the
/// controller has no preference (the agent keeps its heading).
using Heading = std::optional<Vec2>;

}  // namespace hedac
