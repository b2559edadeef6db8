#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "socnav/geometry.hpp"
#include "socnav/rng.hpp"

using namespace socnav;
constexpr double kPi = std::numbers::pi;

namespace {

// Rotation-matrix oracle for the world -> robot transform.
Pose2 oracle_to_frame(const Pose2& p, const Pose2& r) {
  const double c = std::cos(-r.theta), s = std::sin(-r.theta);
  const double dx = p.x - r.x, dy = p.y - r.y;
  return {c * dx - s * dy, s * dx + c * dy, wrap_angle(p.theta - r.theta)};
}

Pose2 euler(Pose2 s, Action a, double dt, double h) {
  const int n = static_cast<int>(std::lround(dt / h));
  for (int i = 0; i < n; ++i) {
    s.x += a.v * std::cos(s.theta) * h;
    s.y += a.v * std::sin(s.theta) * h;
    s.theta += a.w * h;
  }
  s.theta = wrap_angle(s.theta);
  return s;
}

}  // namespace

TEST(WrapAngle, RangeIsHalfOpen) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-12);
  EXPECT_NEAR(wrap_angle(-5 * kPi / 2), -kPi / 2, 1e-12);
  EXPECT_DOUBLE_EQ(wrap_angle(0.3), 0.3);
}

TEST(RobotFrame, IdentityFrame) {
  const Pose2 out = to_robot_frame(Pose2{1, 0, 0}, Pose2{0, 0, 0});
  EXPECT_DOUBLE_EQ(out.x, 1.0);
  EXPECT_DOUBLE_EQ(out.y, 0.0);
  EXPECT_DOUBLE_EQ(out.theta, 0.0);
}

TEST(RobotFrame, QuarterTurnMatchesRotationOracle) {
  const Pose2 p{0, 0, 0}, r{1, 0, kPi / 2};
  const Pose2 out = to_robot_frame(p, r);
  const Pose2 want = oracle_to_frame(p, r);
  EXPECT_NEAR(out.x, want.x, 1e-12);
  EXPECT_NEAR(out.y, want.y, 1e-12);
  EXPECT_NEAR(out.theta, want.theta, 1e-12);
  EXPECT_NEAR(out.x, 0.0, 1e-12);
  EXPECT_NEAR(out.y, 1.0, 1e-12);
  EXPECT_NEAR(out.theta, -kPi / 2, 1e-12);
}

TEST(RobotFrame, RandomPosesMatchOracleAndRoundTrip) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Pose2 p{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-kPi, kPi)};
    const Pose2 r{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-kPi, kPi)};
    const Pose2 local = to_robot_frame(p, r);
    const Pose2 want = oracle_to_frame(p, r);
    EXPECT_NEAR(local.x, want.x, 1e-9);
    EXPECT_NEAR(local.y, want.y, 1e-9);
    EXPECT_NEAR(std::abs(wrap_angle(local.theta - want.theta)), 0.0, 1e-9);
    const Pose2 back = from_robot_frame(local, r);
    EXPECT_NEAR(back.x, p.x, 1e-9);
    EXPECT_NEAR(back.y, p.y, 1e-9);
    EXPECT_NEAR(std::abs(wrap_angle(back.theta - p.theta)), 0.0, 1e-9);
  }
}

TEST(RobotFrame, ReflectionCommutes) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const Pose2 p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3)};
    const Pose2 r{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3)};
    const Pose2 a = to_robot_frame(p, r);
    const Pose2 b = to_robot_frame(Pose2{p.x, -p.y, -p.theta}, Pose2{r.x, -r.y, -r.theta});
    EXPECT_NEAR(a.x, b.x, 1e-12);
    EXPECT_NEAR(-a.y, b.y, 1e-12);
    EXPECT_NEAR(std::abs(wrap_angle(-a.theta - b.theta)), 0.0, 1e-12);
  }
}

TEST(Unicycle, StraightLine) {
  const Pose2 s = unicycle_step({0, 0, 0}, {1, 0}, 0.25);
  EXPECT_DOUBLE_EQ(s.x, 0.25);
  EXPECT_DOUBLE_EQ(s.y, 0.0);
  EXPECT_DOUBLE_EQ(s.theta, 0.0);
}

TEST(Unicycle, PureRotation) {
  const Pose2 s = unicycle_step({0, 0, 0}, {0, kPi}, 0.25);
  EXPECT_NEAR(s.x, 0.0, 1e-15);
  EXPECT_NEAR(s.y, 0.0, 1e-15);
  EXPECT_NEAR(s.theta, kPi / 4, 1e-15);
}

TEST(Unicycle, ArcMatchesClosedFormAndEuler) {
  const Pose2 s = unicycle_step({0, 0, 0}, {1, kPi / 2}, 0.25);
  EXPECT_NEAR(s.x, 2 / kPi * std::sin(kPi / 8), 1e-12);
  EXPECT_NEAR(s.y, 2 / kPi * (1 - std::cos(kPi / 8)), 1e-12);
  EXPECT_NEAR(s.theta, kPi / 8, 1e-12);
  const Pose2 e = euler({0, 0, 0}, {1, kPi / 2}, 0.25, 1e-5);
  EXPECT_LT(std::hypot(s.x - e.x, s.y - e.y), 1e-4);
}

TEST(Unicycle, RandomCommandsAgreeWithFineEuler) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Pose2 start{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-kPi, kPi)};
    const Action a{rng.uniform(0, 1), rng.uniform(-1, 1)};
    const Pose2 s = unicycle_step(start, a, 0.25);
    const Pose2 e = euler(start, a, 0.25, 1e-5);
    EXPECT_LT(std::hypot(s.x - e.x, s.y - e.y), 1e-4);
    EXPECT_GT(s.theta, -kPi);
    EXPECT_LE(s.theta, kPi);
  }
}

TEST(ActionLimits, ClampAndContains) {
  const ActionLimits lim;
  EXPECT_TRUE(lim.contains({0.5, -1.0}));
  EXPECT_FALSE(lim.contains({1.1, 0.0}));
  EXPECT_FALSE(lim.contains({-0.1, 0.0}));
  const Action c = lim.clamp({2.0, -3.0});
  EXPECT_DOUBLE_EQ(c.v, 1.0);
  EXPECT_DOUBLE_EQ(c.w, -1.0);
}

TEST(ReferencePath, RejectsDegenerateInput) {
  EXPECT_THROW(ReferencePath({Pose2{0, 0, 0}}), std::invalid_argument);
  EXPECT_THROW(ReferencePath({Pose2{0, 0, 0}, Pose2{0, 0, 0}}), std::invalid_argument);
}

TEST(ReferencePath, CumulativeArclength) {
  const auto path = ReferencePath::straight({0, 0}, 0.0, 8.0);
  EXPECT_DOUBLE_EQ(path.cumulative_arclength().front(), 0.0);
  EXPECT_DOUBLE_EQ(path.total_length(), 8.0);
  const auto circle = ReferencePath::circle({0, 0}, 0.0, 4.0, true);
  EXPECT_NEAR(circle.total_length(), 2 * 128 * 4.0 * std::sin(kPi / 128), 1e-9);
  const auto& cum = circle.cumulative_arclength();
  for (std::size_t i = 1; i < cum.size(); ++i) EXPECT_GT(cum[i], cum[i - 1]);
}

TEST(ReferencePath, CircleOrientation) {
  const auto ccw = ReferencePath::circle({0, 0}, 0.0, 4.0, true);
  const auto cw = ReferencePath::circle({0, 0}, 0.0, 4.0, false);
  const Pose2 a = ccw.point_at(ccw.total_length() / 4);
  const Pose2 b = cw.point_at(cw.total_length() / 4);
  EXPECT_NEAR(a.x, 4.0, 1e-2);
  EXPECT_NEAR(a.y, 4.0, 1e-2);
  EXPECT_NEAR(b.x, 4.0, 1e-2);
  EXPECT_NEAR(b.y, -4.0, 1e-2);
  EXPECT_NEAR(ccw.centroid().y, 4.0, 1e-9);
  EXPECT_NEAR(cw.centroid().y, -4.0, 1e-9);
}

TEST(PathProgress, Examples) {
  const auto path = ReferencePath::straight({0, 0}, 0.0, 8.0);
  EXPECT_DOUBLE_EQ(path_progress(path, {0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(path_progress(path, {8, 0}), 8.0);
  EXPECT_DOUBLE_EQ(path_progress(path, {4, 0.2}), 4.0);
  EXPECT_DOUBLE_EQ(path_progress(path, {-3, 1}), 0.0);
  EXPECT_DOUBLE_EQ(path_progress(path, {12, -1}), 8.0);
}

TEST(PathProgress, AlwaysWithinPathAndMonotoneWhenTracking) {
  const auto path = ReferencePath::circle({0, 0}, 0.0, 4.0, false);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double s = path_progress(path, {rng.uniform(-10, 10), rng.uniform(-10, 10)});
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, path.total_length());
  }
  const auto line = ReferencePath::straight({0, 0}, 0.3, 8.0);
  double prev = 0.0;
  for (double s = 0.0; s <= 8.0; s += 0.05) {
    const Pose2 p = line.point_at(s);
    const double got = path_progress(line, {p.x - 0.1 * std::sin(0.3), p.y + 0.1 * std::cos(0.3)});
    EXPECT_GE(got, prev - 1e-12);
    prev = got;
  }
}

TEST(LocalPathSegment, AtStart) {
  const auto path = ReferencePath::straight({0, 0}, 0.0, 8.0);
  const auto nodes = local_path_segment(path, {0, 0, 0}, 3, 0.3);
  ASSERT_EQ(nodes.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(nodes[i].x, 0.3 * i, 1e-12);
    EXPECT_NEAR(nodes[i].y, 0.0, 1e-12);
    EXPECT_NEAR(nodes[i].theta, 0.0, 1e-12);
  }
}

TEST(LocalPathSegment, ClampsAtEnd) {
  const auto path = ReferencePath::straight({0, 0}, 0.0, 8.0);
  const auto nodes = local_path_segment(path, {8, 0, 0}, 4, 0.3);
  for (const auto& n : nodes) {
    EXPECT_NEAR(n.x, 0.0, 1e-12);
    EXPECT_NEAR(n.y, 0.0, 1e-12);
  }
}

TEST(LocalPathSegment, LateralOffsetShowsInRobotFrame) {
  const auto path = ReferencePath::straight({0, 0}, 0.0, 8.0);
  const Pose2 robot{2.0, 0.5, 0.0};
  const auto nodes = local_path_segment(path, robot, 10, 0.3);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Pose2 want = oracle_to_frame(Pose2{2.0 + 0.3 * static_cast<double>(i), 0.0, 0.0}, robot);
    EXPECT_NEAR(nodes[i].x, want.x, 1e-12);
    EXPECT_NEAR(nodes[i].y, -0.5, 1e-12);
  }
}
