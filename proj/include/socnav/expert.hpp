#pragma once

#include <vector>

#include "socnav/geometry.hpp"
#include "socnav/orca.hpp"
#include "socnav/scenario.hpp"

namespace socnav {

struct ExpertConfig {
  double lookahead = 1.0;
  double safety_margin = 0.30;
  double tau = 2.0;
  double stop_speed = 0.05;
  /// Preferred velocities are also tried rotated by multiples of side_angle,
  /// up to side_steps to each side.
  double side_angle = 0.1745;
  int side_steps = 9;
  /// Weight of the unfiltered ORCA velocity's progress in the candidate score.
  double intent_weight = 0.25;
  /// Weight of the ORCA velocity's magnitude, which lets the expert sidestep.
  double speed_weight = 0.3;
  /// Resolution of the fallback command grid used when cornered.
  int grid_steps = 8;
};

/// Half-planes the expert's velocity must satisfy, one per human. The robot
/// takes full responsibility for every avoidance manoeuvre.
std::vector<OrcaLine> expert_halfplanes(const EnvState& env, const ExpertConfig& cfg = {});

/// Pure pursuit toward a lookahead point, filtered through the robot's own
/// ORCA constraints and mapped back to unicycle commands.
Action expert_action(const EnvState& env, const ExpertConfig& cfg = {});

}  // namespace socnav
