#include "socnav/orca.hpp"

#include <algorithm>
#include <cmath>

namespace socnav {
namespace {

constexpr double kEpsilon = 1e-12;

// Solves the 1D program along line `line_no` subject to lines [0, line_no)
// and the speed disc.
bool lp1(std::span<const OrcaLine> lines, std::size_t line_no, double radius, Vec2 opt,
         bool direction_opt, Vec2& result) {
  const OrcaLine& line = lines[line_no];
  const double dp = dot(line.point, line.direction);
  const double discriminant = dp * dp + radius * radius - norm_sq(line.point);
  if (discriminant < 0.0) return false;

  const double sqrt_disc = std::sqrt(discriminant);
  double t_left = -dp - sqrt_disc;
  double t_right = -dp + sqrt_disc;

  for (std::size_t i = 0; i < line_no; ++i) {
    const double denominator = det(line.direction, lines[i].direction);
    const double numerator = det(lines[i].direction, line.point - lines[i].point);
    if (std::abs(denominator) <= kEpsilon) {
      if (numerator < 0.0) return false;
      continue;
    }
    const double t = numerator / denominator;
    if (denominator >= 0.0) {
      t_right = std::min(t_right, t);
    } else {
      t_left = std::max(t_left, t);
    }
    if (t_left > t_right) return false;
  }

  if (direction_opt) {
    result = dot(opt, line.direction) > 0.0 ? line.point + t_right * line.direction
                                            : line.point + t_left * line.direction;
  } else {
    const double t = std::clamp(dot(line.direction, opt - line.point), t_left, t_right);
    result = line.point + t * line.direction;
  }
  return true;
}

// Returns the index of the first line it fails on, or lines.size().
std::size_t lp2(std::span<const OrcaLine> lines, double radius, Vec2 opt, bool direction_opt,
                Vec2& result) {
  if (direction_opt) {
    result = opt * radius;
  } else if (norm_sq(opt) > radius * radius) {
    result = normalized(opt) * radius;
  } else {
    result = opt;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (violation(lines[i], result) > 0.0) {
      const Vec2 previous = result;
      if (!lp1(lines, i, radius, opt, direction_opt, result)) {
        result = previous;
        return i;
      }
    }
  }
  return lines.size();
}

// Minimizes the maximum violation, starting from the line lp2 failed on.
void lp3(std::span<const OrcaLine> lines, std::size_t begin_line, double radius, Vec2& result) {
  double distance = 0.0;
  std::vector<OrcaLine> projected;
  for (std::size_t i = begin_line; i < lines.size(); ++i) {
    if (violation(lines[i], result) <= distance) continue;
    projected.clear();
    for (std::size_t j = 0; j < i; ++j) {
      OrcaLine line;
      const double determinant = det(lines[i].direction, lines[j].direction);
      if (std::abs(determinant) <= kEpsilon) {
        if (dot(lines[i].direction, lines[j].direction) > 0.0) continue;
        line.point = 0.5 * (lines[i].point + lines[j].point);
      } else {
        line.point = lines[i].point +
                     (det(lines[j].direction, lines[i].point - lines[j].point) / determinant) *
                         lines[i].direction;
      }
      line.direction = normalized(lines[j].direction - lines[i].direction);
      projected.push_back(line);
    }
    const Vec2 previous = result;
    const Vec2 outward{-lines[i].direction.y, lines[i].direction.x};
    if (lp2(projected, radius, outward, true, result) < projected.size()) {
      // Only reachable through round-off; keep the previous answer.
      result = previous;
    }
    distance = violation(lines[i], result);
  }
}

}  // namespace

OrcaLine orca_line(const OrcaAgent& agent, const OrcaAgent& other, double tau, double dt,
                   double responsibility) {
  const Vec2 rel_pos = other.position - agent.position;
  const Vec2 rel_vel = agent.velocity - other.velocity;
  const double dist_sq = norm_sq(rel_pos);
  const double combined = agent.radius + other.radius + agent.safety_margin;
  const double combined_sq = combined * combined;
  const double inv_tau = 1.0 / tau;

  OrcaLine line;
  Vec2 u;
  if (dist_sq > combined_sq) {
    // Vector from the cutoff centre to the relative velocity.
    const Vec2 w = rel_vel - inv_tau * rel_pos;
    const double w_len_sq = norm_sq(w);
    const double dp = dot(w, rel_pos);
    if (dp < 0.0 && dp * dp > combined_sq * w_len_sq) {
      // Cutoff circle.
      const double w_len = std::sqrt(w_len_sq);
      const Vec2 unit_w = w / w_len;
      line.direction = {unit_w.y, -unit_w.x};
      u = (combined * inv_tau - w_len) * unit_w;
    } else {
      const double leg = std::sqrt(dist_sq - combined_sq);
      // Exact ties take the left leg, which shifts the agent to its left.
      if (det(rel_pos, w) >= 0.0) {
        line.direction = Vec2{rel_pos.x * leg - rel_pos.y * combined,
                              rel_pos.x * combined + rel_pos.y * leg} /
                         dist_sq;
      } else {
        line.direction = -Vec2{rel_pos.x * leg + rel_pos.y * combined,
                               -rel_pos.x * combined + rel_pos.y * leg} /
                         dist_sq;
      }
      u = dot(rel_vel, line.direction) * line.direction - rel_vel;
    }
  } else {
    // Already overlapping: resolve within one step instead of tau.
    const double inv_dt = 1.0 / dt;
    const Vec2 w = rel_vel - inv_dt * rel_pos;
    const double w_len = norm(w);
    const Vec2 unit_w = w_len > 0.0 ? w / w_len : Vec2{0.0, 1.0};
    line.direction = {unit_w.y, -unit_w.x};
    u = (combined * inv_dt - w_len) * unit_w;
  }
  line.point = agent.velocity + responsibility * u;
  return line;
}

std::vector<OrcaLine> orca_halfplanes(const OrcaAgent& agent, std::span<const OrcaAgent> neighbors,
                                      double tau, double dt) {
  std::vector<OrcaLine> lines;
  lines.reserve(neighbors.size());
  for (const auto& other : neighbors) {
    lines.push_back(orca_line(agent, other, tau, dt, other.is_static() ? 1.0 : 0.5));
  }
  return lines;
}

Vec2 solve_velocity_lp(std::span<const OrcaLine> lines, Vec2 pref, double max_speed) {
  Vec2 result;
  const std::size_t fail = lp2(lines, max_speed, pref, false, result);
  if (fail < lines.size()) lp3(lines, fail, max_speed, result);
  return result;
}

void crowd_step(std::vector<OrcaAgent>& agents, const OrcaAgent& robot_proxy,
                const CrowdParams& params, const GoalSampler& respawn) {
  std::vector<Vec2> next(agents.size());
  std::vector<OrcaAgent> neighbors;
  neighbors.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    OrcaAgent& a = agents[i];
    if (a.is_static()) continue;
    if (norm(a.goal - a.position) < params.goal_tolerance && respawn) a.goal = respawn(a);

    const Vec2 to_goal = a.goal - a.position;
    const double dist = norm(to_goal);
    if (dist > a.max_speed * params.dt) {
      const Vec2 u = to_goal / dist;
      const double c = std::cos(params.pref_rotation), sn = std::sin(params.pref_rotation);
      a.pref_velocity = Vec2{c * u.x - sn * u.y, sn * u.x + c * u.y} * a.max_speed;
    } else {
      a.pref_velocity = to_goal / params.dt;
    }

    neighbors.clear();
    for (std::size_t j = 0; j < agents.size(); ++j) {
      if (j != i) neighbors.push_back(agents[j]);
    }
    neighbors.push_back(robot_proxy);
    const auto lines = orca_halfplanes(a, neighbors, params.tau, params.dt);
    next[i] = solve_velocity_lp(lines, a.pref_velocity, a.max_speed);
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    OrcaAgent& a = agents[i];
    if (a.is_static()) {
      a.velocity = {};
      continue;
    }
    a.velocity = next[i];
    a.position += a.velocity * params.dt;
  }
}

}  // namespace socnav
