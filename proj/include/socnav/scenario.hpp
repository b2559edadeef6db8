#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "socnav/geometry.hpp"
#include "socnav/orca.hpp"
#include "socnav/rng.hpp"

namespace socnav {

enum class PathKind { straight_8m, circle_cw_8m_diam, circle_ccw_8m_diam };

std::string to_string(PathKind k);
PathKind path_kind_from_string(const std::string& s);

struct ScenarioSpec {
  PathKind path_kind = PathKind::straight_8m;
  int n_static = 1;
  int n_dynamic = 0;
  std::uint64_t seed = 0;

  int n_regular() const { return n_dynamic * 2 / 3; }
  int n_aggressive() const { return n_dynamic - n_regular(); }
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// The 27 evaluation scenarios, ordered path-major, then static count, then
/// dynamic count.
std::vector<ScenarioSpec> build_suite();

/// One JSON object per line.
std::string suite_to_jsonl(const std::vector<ScenarioSpec>& suite);

struct EnvConfig {
  double dt = 0.25;
  double t_max = 120.0;
  double robot_radius = 0.3;
  double goal_tolerance = 0.2;
  double spawn_ring_radius = 6.0;
  double sensing_radius = 10.0;
  ActionLimits limits;
  CrowdParams crowd;
};

/// Fixed-capacity position history, oldest sample first.
class PositionHistory {
 public:
  static constexpr std::size_t kCapacity = 10;

  void push(Vec2 p);
  std::size_t size() const { return count_; }
  /// i = 0 is the oldest retained sample.
  Vec2 at(std::size_t i) const { return buf_[(head_ + kCapacity - count_ + i) % kCapacity]; }
  Vec2 latest() const { return at(count_ - 1); }
  friend bool operator==(const PositionHistory&, const PositionHistory&) = default;

 private:
  std::array<Vec2, kCapacity> buf_{};
  std::size_t head_ = 0;
  std::size_t count_ = 0;
};

struct EnvState {
  ScenarioSpec spec;
  EnvConfig config;
  std::shared_ptr<const ReferencePath> path;
  Pose2 robot;
  Action robot_action;
  std::vector<OrcaAgent> humans;
  PositionHistory robot_history;
  std::vector<PositionHistory> human_histories;
  std::vector<char> in_contact;
  double t = 0.0;
  int steps = 0;
  double progress = 0.0;
  int collisions = 0;
  double distance_driven = 0.0;
  double reward_sum = 0.0;
  bool done = false;
  bool reached_goal = false;
  Rng rng;
};

struct StepEvents {
  bool collision_new = false;
  bool reached_goal = false;
  bool timeout = false;
};

struct StepResult {
  double reward = 0.0;
  StepEvents events;
};

struct EpisodeResult {
  bool success = false;
  int collisions = 0;
  double nav_time = 0.0;
  double distance = 0.0;
  double reward_sum = 0.0;
  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

std::shared_ptr<const ReferencePath> make_path(PathKind kind);

EnvState reset(const ScenarioSpec& spec, std::uint64_t seed, const EnvConfig& config = {});

/// Advances the episode by one control step. Throws std::invalid_argument for
/// out-of-bounds actions and std::logic_error once the episode is over.
StepResult step(EnvState& env, Action a);

/// Surrogate reward for one transition.
double reward(double progress_delta, bool collision_new, bool reached_goal);

EpisodeResult episode_result(const EnvState& env);

}  // namespace socnav
