#pragma once

#include <functional>
#include <span>
#include <vector>

#include "socnav/geometry.hpp"

namespace socnav {

enum class Profile { regular, aggressive, static_ };

struct OrcaAgent {
  Vec2 position;
  Vec2 velocity;
  double radius = 0.3;
  double max_speed = 1.2;
  Vec2 pref_velocity;
  double safety_margin = 0.3;
  Vec2 goal;
  Profile profile = Profile::regular;

  bool is_static() const { return profile == Profile::static_; }
};

/// Half-plane of admissible velocities: those on the left of `direction`
/// through `point`.
struct OrcaLine {
  Vec2 point;
  Vec2 direction;
};

struct CrowdParams {
  double tau = 2.0;
  double dt = 0.25;
  double regular_margin = 0.30;
  double aggressive_margin = 0.02;
  double human_radius = 0.3;
  double human_max_speed = 1.2;
  double goal_tolerance = 0.3;
  /// Counter-clockwise turn (rad) applied to the cruising preferred velocity.
  /// Breaks exact symmetry, e.g. agents swapping places across a circle.
  double pref_rotation = 0.05;
};

/// Velocity-space constraint that `agent` must satisfy to avoid `other`.
/// `responsibility` is the share of the escape vector the agent takes (0.5
/// for reciprocating neighbours).
OrcaLine orca_line(const OrcaAgent& agent, const OrcaAgent& other, double tau, double dt,
                   double responsibility);

/// One half-plane per neighbour. Dynamic neighbours share the correction
/// equally; static neighbours never react, so the agent takes all of it.
std::vector<OrcaLine> orca_halfplanes(const OrcaAgent& agent, std::span<const OrcaAgent> neighbors,
                                      double tau, double dt);

/// Velocity closest to `pref` inside every half-plane and the speed disc. If
/// the constraints are infeasible, minimizes the largest violation instead.
Vec2 solve_velocity_lp(std::span<const OrcaLine> lines, Vec2 pref, double max_speed);

/// Signed violation of a half-plane (positive = outside).
inline double violation(const OrcaLine& line, Vec2 v) {
  return det(line.direction, line.point - v);
}

/// Called when a dynamic agent reaches its goal; returns the replacement.
using GoalSampler = std::function<Vec2(const OrcaAgent&)>;

/// Advances every agent one step. Dynamic agents avoid each other and the
/// robot proxy; static agents stay in place.
void crowd_step(std::vector<OrcaAgent>& agents, const OrcaAgent& robot_proxy,
                const CrowdParams& params, const GoalSampler& respawn);

}  // namespace socnav
