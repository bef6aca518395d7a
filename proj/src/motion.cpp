#include "hedac/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hedac {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double signed_angle(Vec2 from, Vec2 to) { return std::atan2(cross(from, to), dot(from, to)); }

AgentState step_kinematic(const AgentState& a, const Heading& dir, double dt, const Domain& domain) {
  AgentState next = a;
  if (dir) next.theta = wrap_angle(std::atan2(dir->y, dir->x));
  const Vec2 d = dir ? *dir : a.heading();
  next.z = a.z + (a.v * dt) * d;
  return enforce_boundary(next, domain);
}

AgentState step_dubins(const AgentState& a, const Heading& dir, double dt, const Domain& domain) {
  AgentState next = a;
  if (dir) {
    const double wanted = signed_angle(a.heading(), *dir) / dt;
    const double limit = a.omega_max();
    const double omega = std::copysign(std::min(std::abs(wanted), limit), wanted);
    next.theta = wrap_angle(a.theta + omega * dt);
  }
  next.z = a.z + (a.v * dt) * next.heading();
  return enforce_boundary(next, domain);
}

AgentState step_agent(const AgentState& a, const Heading& dir, double dt, const Domain& domain) {
  return a.model == MotionModel::kinematic ? step_kinematic(a, dir, dt, domain)
                                           : step_dubins(a, dir, dt, domain);
}

AgentState enforce_boundary(const AgentState& a, const Domain& domain) {
  AgentState out = a;
  Vec2 h = a.heading();
  bool clamped = false;
  // heading components pointing out of a violated wall are mirrored inward
  if (out.z.x < 0.0) { out.z.x = 0.0; h.x = std::abs(h.x); clamped = true; }
  if (out.z.x > domain.width) { out.z.x = domain.width; h.x = -std::abs(h.x); clamped = true; }
  if (out.z.y < 0.0) { out.z.y = 0.0; h.y = std::abs(h.y); clamped = true; }
  if (out.z.y > domain.height) { out.z.y = domain.height; h.y = -std::abs(h.y); clamped = true; }
  if (clamped) out.theta = wrap_angle(std::atan2(h.y, h.x));
  return out;
}

}  // namespace hedac
