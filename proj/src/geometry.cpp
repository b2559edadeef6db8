#include "socnav/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace socnav {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

Action ActionLimits::clamp(Action a) const {
  return {std::clamp(a.v, v_min, v_max), std::clamp(a.w, -w_max, w_max)};
}

Pose2 to_robot_frame(const Pose2& p, const Pose2& robot) {
  const Vec2 local = to_robot_frame(p.position(), robot);
  return {local.x, local.y, wrap_angle(p.theta - robot.theta)};
}

Vec2 to_robot_frame(Vec2 p, const Pose2& robot) {
  const double c = std::cos(robot.theta);
  const double s = std::sin(robot.theta);
  const double dx = p.x - robot.x;
  const double dy = p.y - robot.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Pose2 from_robot_frame(const Pose2& p, const Pose2& robot) {
  const double c = std::cos(robot.theta);
  const double s = std::sin(robot.theta);
  return {robot.x + c * p.x - s * p.y, robot.y + s * p.x + c * p.y,
          wrap_angle(p.theta + robot.theta)};
}

Pose2 unicycle_step(const Pose2& s, Action a, double dt) {
  if (std::abs(a.w) < 1e-9) {
    return {s.x + a.v * dt * std::cos(s.theta), s.y + a.v * dt * std::sin(s.theta),
            wrap_angle(s.theta + a.w * dt)};
  }
  const double th1 = s.theta + a.w * dt;
  const double r = a.v / a.w;
  return {s.x + r * (std::sin(th1) - std::sin(s.theta)),
          s.y + r * (std::cos(s.theta) - std::cos(th1)), wrap_angle(th1)};
}

// ---------------------------------------------------------------------------

ReferencePath::ReferencePath(std::vector<Pose2> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("ReferencePath needs at least 2 nodes");
  cumulative_.reserve(nodes_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const double seg = norm(nodes_[i].position() - nodes_[i - 1].position());
    if (!(seg > 0.0)) throw std::invalid_argument("ReferencePath has a zero-length segment");
    cumulative_.push_back(cumulative_.back() + seg);
  }
}

ReferencePath ReferencePath::straight(Vec2 start, double heading, double length) {
  const Vec2 dir{std::cos(heading), std::sin(heading)};
  const Vec2 end = start + dir * length;
  return ReferencePath({{start.x, start.y, wrap_angle(heading)}, {end.x, end.y, wrap_angle(heading)}});
}

ReferencePath ReferencePath::circle(Vec2 start, double heading, double radius, bool ccw,
                                    int segments) {
  const double sign = ccw ? 1.0 : -1.0;
  // Center lies to the left (ccw) or right (cw) of the start heading.
  const Vec2 normal{-std::sin(heading) * sign, std::cos(heading) * sign};
  const Vec2 center = start + normal * radius;
  const Vec2 r0 = start - center;
  std::vector<Pose2> nodes;
  nodes.reserve(static_cast<std::size_t>(segments) + 1);
  for (int k = 0; k <= segments; ++k) {
    const double phi = sign * 2.0 * std::numbers::pi * k / segments;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Vec2 p = center + Vec2{c * r0.x - s * r0.y, s * r0.x + c * r0.y};
    if (k == segments) p = start;
    nodes.push_back({p.x, p.y, wrap_angle(heading + phi)});
  }
  return ReferencePath(std::move(nodes));
}

Pose2 ReferencePath::point_at(double s) const {
  if (s <= 0.0) return nodes_.front();
  if (s >= total_length()) return nodes_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const Vec2 a = nodes_[i].position();
  const Vec2 b = nodes_[i + 1].position();
  const double frac = (s - cumulative_[i]) / (cumulative_[i + 1] - cumulative_[i]);
  const Vec2 p = a + (b - a) * frac;
  return {p.x, p.y, std::atan2(b.y - a.y, b.x - a.x)};
}

double ReferencePath::closest_arclength(Vec2 p) const {
  return closest_arclength(p, 0.0, total_length());
}

double ReferencePath::closest_arclength(Vec2 p, double lo, double hi) const {
  lo = std::clamp(lo, 0.0, total_length());
  hi = std::clamp(hi, lo, total_length());
  double best_s = lo;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double s0 = cumulative_[i];
    const double s1 = cumulative_[i + 1];
    if (s1 < lo || s0 > hi) continue;
    const Vec2 a = nodes_[i].position();
    const Vec2 ab = nodes_[i + 1].position() - a;
    double t = dot(p - a, ab) / norm_sq(ab);
    double s = std::clamp(s0 + t * (s1 - s0), std::max(s0, lo), std::min(s1, hi));
    t = (s - s0) / (s1 - s0);
    const double d = norm_sq(p - (a + ab * t));
    if (d < best_d) {
      best_d = d;
      best_s = s;
    }
  }
  return best_s;
}

Vec2 ReferencePath::centroid() const {
  // Closed paths repeat the first node at the end; count it once.
  const bool closed = nodes_.front().position() == nodes_.back().position();
  const std::size_t n = closed ? nodes_.size() - 1 : nodes_.size();
  Vec2 c;
  for (std::size_t i = 0; i < n; ++i) c += nodes_[i].position();
  return c / static_cast<double>(n);
}

std::vector<Pose2> local_path_segment_from(const ReferencePath& path, const Pose2& robot,
                                           double start_arclength, int n_nodes,
                                           double spacing) {
  std::vector<Pose2> out;
  out.reserve(static_cast<std::size_t>(std::max(n_nodes, 0)));
  for (int k = 0; k < n_nodes; ++k) {
    const double s = std::min(start_arclength + k * spacing, path.total_length());
    out.push_back(to_robot_frame(path.point_at(s), robot));
  }
  return out;
}

std::vector<Pose2> local_path_segment(const ReferencePath& path, const Pose2& robot, int n_nodes,
                                      double spacing) {
  return local_path_segment_from(path, robot, path.closest_arclength(robot.position()), n_nodes,
                                 spacing);
}

double path_progress(const ReferencePath& path, Vec2 position) {
  return path.closest_arclength(position);
}

}  // namespace socnav
