#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace socnav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend Vec2 operator*(double s, Vec2 v) { return v * s; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
inline double det(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// Unicycle command: forward speed (m/s) and turn rate (rad/s).
struct Action {
  double v = 0.0;
  double w = 0.0;
  friend bool operator==(const Action&, const Action&) = default;
};

struct ActionLimits {
  double v_min = 0.0;
  double v_max = 1.0;
  double w_max = 1.0;

  bool contains(Action a, double tol = 1e-12) const {
    return a.v >= v_min - tol && a.v <= v_max + tol && std::abs(a.w) <= w_max + tol;
  }
  Action clamp(Action a) const;
};

/// Expresses `p` in the frame whose origin and heading are `robot`.
Pose2 to_robot_frame(const Pose2& p, const Pose2& robot);
Vec2 to_robot_frame(Vec2 p, const Pose2& robot);
/// Inverse of to_robot_frame.
Pose2 from_robot_frame(const Pose2& p, const Pose2& robot);

/// Exact arc integration of the unicycle model over `dt` seconds.
Pose2 unicycle_step(const Pose2& s, Action a, double dt);

/// Piecewise-linear reference path parameterized by arc length.
class ReferencePath {
 public:
  /// Throws std::invalid_argument for fewer than 2 nodes or zero-length
  /// segments.
  explicit ReferencePath(std::vector<Pose2> nodes);

  static ReferencePath straight(Vec2 start, double heading, double length);
  /// Full circle starting at `start` with tangent heading `heading`.
  static ReferencePath circle(Vec2 start, double heading, double radius, bool ccw,
                              int segments = 128);

  const std::vector<Pose2>& nodes() const { return nodes_; }
  const std::vector<double>& cumulative_arclength() const { return cumulative_; }
  double total_length() const { return cumulative_.back(); }

  /// Pose at arc length s (clamped to [0, total]). Interior headings follow
  /// the containing segment; the endpoints return the stored node poses.
  Pose2 point_at(double s) const;

  /// Arc length of the closest point over the whole path. Ties resolve to
  /// the smallest arc length.
  double closest_arclength(Vec2 p) const;
  /// Closest point restricted to arc lengths in [lo, hi].
  double closest_arclength(Vec2 p, double lo, double hi) const;

  /// Mean of the node positions.
  Vec2 centroid() const;

 private:
  std::vector<Pose2> nodes_;
  std::vector<double> cumulative_;
};

/// `n_nodes` robot-frame poses spaced `spacing` apart along the path,
/// starting at the closest path point; clamped at the path end.
std::vector<Pose2> local_path_segment(const ReferencePath& path, const Pose2& robot,
                                      int n_nodes, double spacing);
/// Same, starting from a known arc length.
std::vector<Pose2> local_path_segment_from(const ReferencePath& path, const Pose2& robot,
                                           double start_arclength, int n_nodes,
                                           double spacing);

/// Arc length of the closest point on the path.
double path_progress(const ReferencePath& path, Vec2 position);

}  // namespace socnav
