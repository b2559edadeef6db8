#include "socnav/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace socnav {
namespace {

constexpr double kPathLength = 8.0;
constexpr double kCircleRadius = 4.0;
constexpr double kGoalJitter = 0.6;

Vec2 on_ring(Vec2 center, double radius, double angle) {
  return center + Vec2{std::cos(angle), std::sin(angle)} * radius;
}

double static_fraction(int index, int count) {
  // 1 -> 1/2; 2 -> 1/3, 2/3; 3 -> 1/4, 1/2, 3/4.
  return static_cast<double>(index + 1) / static_cast<double>(count + 1);
}

}  // namespace

std::string to_string(PathKind k) {
  switch (k) {
    case PathKind::straight_8m: return "straight_8m";
    case PathKind::circle_cw_8m_diam: return "circle_cw_8m_diam";
    case PathKind::circle_ccw_8m_diam: return "circle_ccw_8m_diam";
  }
  return "?";
}

PathKind path_kind_from_string(const std::string& s) {
  if (s == "straight_8m") return PathKind::straight_8m;
  if (s == "circle_cw_8m_diam") return PathKind::circle_cw_8m_diam;
  if (s == "circle_ccw_8m_diam") return PathKind::circle_ccw_8m_diam;
  throw std::invalid_argument("unknown path kind: " + s);
}

std::vector<ScenarioSpec> build_suite() {
  std::vector<ScenarioSpec> suite;
  std::uint64_t index = 0;
  for (PathKind k : {PathKind::straight_8m, PathKind::circle_cw_8m_diam,
                     PathKind::circle_ccw_8m_diam}) {
    for (int n_static : {1, 2, 3}) {
      for (int n_dynamic : {0, 3, 6}) suite.push_back({k, n_static, n_dynamic, index++});
    }
  }
  return suite;
}

std::string suite_to_jsonl(const std::vector<ScenarioSpec>& suite) {
  std::ostringstream out;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& s = suite[i];
    out << "{\"index\":" << i << ",\"path_kind\":\"" << to_string(s.path_kind)
        << "\",\"n_static\":" << s.n_static << ",\"n_dynamic\":" << s.n_dynamic
        << ",\"n_regular\":" << s.n_regular() << ",\"n_aggressive\":" << s.n_aggressive()
        << ",\"seed\":" << s.seed << "}\n";
  }
  return out.str();
}

void PositionHistory::push(Vec2 p) {
  buf_[head_] = p;
  head_ = (head_ + 1) % kCapacity;
  if (count_ < kCapacity) ++count_;
}

std::shared_ptr<const ReferencePath> make_path(PathKind kind) {
  switch (kind) {
    case PathKind::straight_8m:
      return std::make_shared<const ReferencePath>(ReferencePath::straight({0, 0}, 0.0, kPathLength));
    case PathKind::circle_cw_8m_diam:
      return std::make_shared<const ReferencePath>(
          ReferencePath::circle({0, 0}, 0.0, kCircleRadius, false));
    case PathKind::circle_ccw_8m_diam:
      return std::make_shared<const ReferencePath>(
          ReferencePath::circle({0, 0}, 0.0, kCircleRadius, true));
  }
  throw std::invalid_argument("unknown path kind");
}

EnvState reset(const ScenarioSpec& spec, std::uint64_t seed, const EnvConfig& config) {
  EnvState env;
  env.spec = spec;
  env.config = config;
  env.path = make_path(spec.path_kind);
  env.rng = Rng(derive_seed({static_cast<std::uint64_t>(spec.path_kind),
                             static_cast<std::uint64_t>(spec.n_static),
                             static_cast<std::uint64_t>(spec.n_dynamic), spec.seed, seed}));
  env.robot = env.path->point_at(0.0);
  env.robot_history.push(env.robot.position());

  const CrowdParams& crowd = config.crowd;
  for (int i = 0; i < spec.n_static; ++i) {
    const Pose2 p = env.path->point_at(static_fraction(i, spec.n_static) * env.path->total_length());
    OrcaAgent a;
    a.position = p.position();
    a.goal = a.position;
    a.radius = crowd.human_radius;
    a.max_speed = crowd.human_max_speed;
    a.safety_margin = crowd.regular_margin;
    a.profile = Profile::static_;
    env.humans.push_back(a);
  }

  const Vec2 center = env.path->centroid();
  const double ring = config.spawn_ring_radius;
  for (int i = 0; i < spec.n_dynamic; ++i) {
    const bool aggressive = i >= spec.n_regular();
    OrcaAgent a;
    a.radius = crowd.human_radius;
    a.max_speed = crowd.human_max_speed;
    a.profile = aggressive ? Profile::aggressive : Profile::regular;
    a.safety_margin = aggressive ? crowd.aggressive_margin : crowd.regular_margin;
    double angle = 0.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      angle = env.rng.uniform(0.0, 2.0 * std::numbers::pi);
      const Vec2 p = on_ring(center, ring, angle);
      bool clear = norm(p - env.robot.position()) > 1.5;
      for (const auto& other : env.humans) clear = clear && norm(p - other.position) > 1.0;
      if (clear) break;
    }
    a.position = on_ring(center, ring, angle);
    a.goal = on_ring(center, ring,
                     angle + std::numbers::pi + env.rng.uniform(-kGoalJitter, kGoalJitter));
    env.humans.push_back(a);
  }

  env.human_histories.resize(env.humans.size());
  for (std::size_t i = 0; i < env.humans.size(); ++i) {
    env.human_histories[i].push(env.humans[i].position);
  }
  env.in_contact.assign(env.humans.size(), 0);
  for (std::size_t i = 0; i < env.humans.size(); ++i) {
    env.in_contact[i] = norm(env.humans[i].position - env.robot.position()) <
                        config.robot_radius + env.humans[i].radius;
  }
  return env;
}

double reward(double progress_delta, bool collision_new, bool reached_goal) {
  return 1.0 * progress_delta - 10.0 * (collision_new ? 1.0 : 0.0) - 0.01 +
         10.0 * (reached_goal ? 1.0 : 0.0);
}

StepResult step(EnvState& env, Action a) {
  if (env.done) throw std::logic_error("step() called on a finished episode");
  if (!env.config.limits.contains(a)) throw std::invalid_argument("action outside bounds");

  const EnvConfig& cfg = env.config;
  OrcaAgent proxy;
  proxy.position = env.robot.position();
  proxy.velocity = Vec2{std::cos(env.robot.theta), std::sin(env.robot.theta)} * env.robot_action.v;
  proxy.radius = cfg.robot_radius;
  proxy.max_speed = cfg.limits.v_max;
  proxy.profile = Profile::regular;

  const Vec2 center = env.path->centroid();
  Rng& rng = env.rng;
  const double ring = cfg.spawn_ring_radius;
  crowd_step(env.humans, proxy, cfg.crowd, [&](const OrcaAgent& h) {
    const Vec2 rel = h.position - center;
    const double angle = std::atan2(rel.y, rel.x);
    return on_ring(center, ring, angle + std::numbers::pi + rng.uniform(-kGoalJitter, kGoalJitter));
  });

  const Pose2 next = unicycle_step(env.robot, a, cfg.dt);
  env.distance_driven += norm(next.position() - env.robot.position());
  env.robot = next;
  env.robot_action = a;
  env.steps += 1;
  env.t = env.steps * cfg.dt;

  env.robot_history.push(env.robot.position());
  for (std::size_t i = 0; i < env.humans.size(); ++i) {
    env.human_histories[i].push(env.humans[i].position);
  }

  StepResult out;
  for (std::size_t i = 0; i < env.humans.size(); ++i) {
    const bool touching = norm(env.humans[i].position - env.robot.position()) <
                          cfg.robot_radius + env.humans[i].radius;
    if (touching && !env.in_contact[i]) {
      out.events.collision_new = true;
      env.collisions += 1;
    }
    env.in_contact[i] = touching;
  }

  const double previous = env.progress;
  env.progress = env.path->closest_arclength(env.robot.position(), previous - 1.0, previous + 1.5);
  out.events.reached_goal = env.progress >= env.path->total_length() - cfg.goal_tolerance;
  out.events.timeout = !out.events.reached_goal && env.t >= cfg.t_max - 1e-9;

  out.reward = reward(env.progress - previous, out.events.collision_new, out.events.reached_goal);
  env.reward_sum += out.reward;
  env.reached_goal = out.events.reached_goal;
  env.done = out.events.reached_goal || out.events.timeout;
  return out;
}

EpisodeResult episode_result(const EnvState& env) {
  EpisodeResult r;
  r.success = env.reached_goal && env.collisions == 0 && env.t <= env.config.t_max + 1e-9;
  r.collisions = env.collisions;
  r.nav_time = env.t;
  r.distance = env.distance_driven;
  r.reward_sum = env.reward_sum;
  return r;
}

}  // namespace socnav
