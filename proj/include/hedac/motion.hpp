#pragma once

#include "hedac/agent.hpp"

namespace hedac {

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

/// Signed angle that rotates `from` onto `to`, in (-pi, pi].
double signed_angle(Vec2 from, Vec2 to);

/// Constant-speed move along `dir` with an instantaneous heading change.
/// A degenerate `dir` continues straight along the current heading.
AgentState step_kinematic(const AgentState& a, const Heading& dir, double dt, const Domain& domain);

/// Unicycle step: the turn toward `dir` is limited to omega_max * dt, then the
/// agent advances v * dt along its new heading.
AgentState step_dubins(const AgentState& a, const Heading& dir, double dt, const Domain& domain);

/// Dispatch on a.model.
AgentState step_agent(const AgentState& a, const Heading& dir, double dt, const Domain& domain);

/// Clamp the position into the domain; for each violated wall the heading is
/// reflected about that wall.
AgentState enforce_boundary(const AgentState& a, const Domain& domain);

}  // namespace hedac
