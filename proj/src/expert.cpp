#include "socnav/expert.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace socnav {

std::vector<OrcaLine> expert_halfplanes(const EnvState& env, const ExpertConfig& cfg) {
  OrcaAgent self;
  self.position = env.robot.position();
  self.velocity = Vec2{std::cos(env.robot.theta), std::sin(env.robot.theta)} * env.robot_action.v;
  self.radius = env.config.robot_radius;
  self.max_speed = env.config.limits.v_max;
  self.safety_margin = cfg.safety_margin;

  std::vector<OrcaLine> lines;
  lines.reserve(env.humans.size());
  for (const auto& h : env.humans) lines.push_back(orca_line(self, h, cfg.tau, env.config.dt, 1.0));
  return lines;
}

namespace {

struct Candidate {
  Action action;
  double violation = 0.0;
  double score = 0.0;
};

// Velocity the unicycle realizes over one step: its mean heading times v.
Vec2 realized_velocity(const EnvState& env, Action a) {
  const double mid = env.robot.theta + 0.5 * a.w * env.config.dt;
  return Vec2{std::cos(mid), std::sin(mid)} * a.v;
}

double max_violation(const std::vector<OrcaLine>& lines, Vec2 v) {
  double worst = 0.0;
  for (const auto& l : lines) worst = std::max(worst, violation(l, v));
  return worst;
}

// Better = smaller violation, then larger score. Earlier candidates win ties.
bool better(const Candidate& a, const Candidate& b) {
  if (a.violation < b.violation - 1e-9) return true;
  if (a.violation > b.violation + 1e-9) return false;
  return a.score > b.score + 1e-9;
}

}  // namespace

Action expert_action(const EnvState& env, const ExpertConfig& cfg) {
  const ActionLimits& lim = env.config.limits;
  const ReferencePath& path = *env.path;
  const Vec2 pos = env.robot.position();
  const Vec2 heading{std::cos(env.robot.theta), std::sin(env.robot.theta)};

  const Vec2 target = path.point_at(std::min(env.progress + cfg.lookahead, path.total_length())).position();
  const Vec2 to_target = target - pos;
  const Vec2 goal_dir = norm(to_target) > 1e-9 ? normalized(to_target) : heading;
  const auto lines = expert_halfplanes(env, cfg);

  auto make = [&](Action a, Vec2 u) {
    const Vec2 r = realized_velocity(env, a);
    return Candidate{a, max_violation(lines, r),
                     dot(r, goal_dir) + cfg.intent_weight * dot(u, goal_dir) + cfg.speed_weight * norm(u)};
  };

  // Pure pursuit alone stalls in front of anything standing on the path, so
  // the preferred velocity is also tried rotated to either side. Candidates
  // are scored mostly by the progress they realize, with a bonus for keeping
  // up speed; the unrotated one wins ties.
  std::optional<Candidate> best;
  for (int k = 0; k <= 2 * cfg.side_steps; ++k) {
    const int signed_k = (k + 1) / 2 * (k % 2 == 1 ? 1 : -1);
    const double angle = signed_k * cfg.side_angle;
    const Vec2 pref = Vec2{goal_dir.x * std::cos(angle) - goal_dir.y * std::sin(angle),
                           goal_dir.x * std::sin(angle) + goal_dir.y * std::cos(angle)} *
                      lim.v_max;
    const Vec2 u = solve_velocity_lp(lines, pref, lim.v_max);
    const double speed = norm(u);
    Candidate c;
    if (speed < cfg.stop_speed) {
      c = make({lim.v_min, 0.0}, u);
    } else {
      const double delta = std::atan2(det(heading, u), dot(heading, u));
      if (std::cos(delta) < 0.0) {
        c = make({lim.v_min, delta >= 0.0 ? lim.w_max : -lim.w_max}, u);
      } else {
        // Map back to unicycle commands, then slow down until the realized
        // velocity is admissible.
        const double w = std::clamp(2.0 * speed * std::sin(delta) / cfg.lookahead, -lim.w_max, lim.w_max);
        double v = std::clamp(speed * std::cos(delta), lim.v_min, lim.v_max);
        c = make({v, w}, u);
        while (c.violation > 1e-9 && v >= cfg.stop_speed) {
          v *= 0.5;
          const Candidate slower = make({v < cfg.stop_speed ? lim.v_min : v, w}, u);
          if (better(slower, c) || slower.violation <= 1e-9) c = slower;
        }
      }
    }
    if (!best || better(c, *best)) best = c;
  }

  // Cornered: no tracked velocity is admissible. Take whichever command on a
  // coarse grid violates the constraints least.
  if (best->violation > 1e-9) {
    for (int i = 0; i <= cfg.grid_steps; ++i) {
      for (int j = 0; j <= cfg.grid_steps; ++j) {
        const Action a{lim.v_min + (lim.v_max - lim.v_min) * i / cfg.grid_steps,
                       -lim.w_max + 2.0 * lim.w_max * j / cfg.grid_steps};
        const Candidate c = make(a, realized_velocity(env, a));
        if (better(c, *best)) best = c;
      }
    }
  }
  return best->action;
}

}  // namespace socnav
