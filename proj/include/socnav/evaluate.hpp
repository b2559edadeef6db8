#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "socnav/expert.hpp"
#include "socnav/policy.hpp"
#include "socnav/scenario.hpp"
#include "socnav/state.hpp"

namespace socnav {

/// What a controller commits to at one step: the executed action and the
/// plan it came from (for rendering).
struct Decision {
  Action action;
  std::vector<Action> plan;
};

using Controller = std::function<Decision(const EnvState&)>;

Controller expert_controller(const ExpertConfig& cfg = {});
/// Executes the first action of the selected chunk and replans every step.
/// The network must outlive the controller.
Controller policy_controller(const PolicyNet& net);

struct StepLog {
  double t = 0.0;
  Pose2 robot;
  Action action;
  std::vector<Action> plan;
  std::vector<Vec2> humans;
  bool collision = false;
  double reward = 0.0;
};

struct EpisodeLog {
  ScenarioSpec spec;
  std::uint64_t seed = 0;
  std::vector<Vec2> static_humans;
  /// Pose before the first step.
  Pose2 start;
  std::vector<Vec2> start_humans;
  std::vector<StepLog> steps;
  EpisodeResult result;
};

/// Runs one episode to completion. When `log` is given, every step is
/// recorded into it.
EpisodeResult rollout(const ScenarioSpec& spec, std::uint64_t seed, const Controller& controller,
                      const EnvConfig& env_config = {}, EpisodeLog* log = nullptr);

void write_episode_log(const EpisodeLog& log, std::ostream& out);
void write_episode_log(const EpisodeLog& log, const std::filesystem::path& path);
EpisodeLog read_episode_log(std::istream& in);
EpisodeLog read_episode_log(const std::filesystem::path& path);

struct Metrics {
  double SR = 0.0;
  double CPM = 0.0;
  double NT = 0.0;
  double norm_reward = 0.0;
  int episodes = 0;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// collisions / max(distance, 1 m).
double collisions_per_meter(const EpisodeResult& r);

/// `reference` holds the expert's results on the same (scenario, seed) list,
/// in the same order.
Metrics compute_metrics(const std::vector<EpisodeResult>& episodes,
                        const std::vector<EpisodeResult>& reference);

struct EpisodeKey {
  std::size_t scenario = 0;
  ScenarioSpec spec;
  std::uint64_t seed = 0;
};

/// Every scenario of `suite` crossed with seeds 0..seeds_per_scenario-1.
std::vector<EpisodeKey> evaluation_episodes(const std::vector<ScenarioSpec>& suite, int seeds_per_scenario);

std::vector<EpisodeResult> run_episodes(const std::vector<EpisodeKey>& keys, const Controller& controller,
                                        const EnvConfig& env_config = {});

struct Evaluation {
  Metrics metrics;
  std::vector<EpisodeKey> keys;
  std::vector<EpisodeResult> episodes;
  std::vector<EpisodeResult> reference;
};

/// Expert results for `keys`, memoized per key and environment config.
std::vector<EpisodeResult> expert_reference(const std::vector<EpisodeKey>& keys,
                                            const EnvConfig& env_config = {});

Evaluation evaluate(const Controller& controller, const std::vector<ScenarioSpec>& suite,
                    int seeds_per_scenario = 4, const EnvConfig& env_config = {});

/// Per-episode table as comma-separated values with a header row.
void write_episode_csv(const Evaluation& e, std::ostream& out);

struct CollectOptions {
  int H = 3;
  bool ccw_only = false;
  EnvConfig env;
  ExpertConfig expert;
};

/// Expert demonstrations over randomly drawn suite scenarios. Episodes with a
/// collision are dropped whole; states with fewer than H future actions are
/// dropped. Stops after the first episode that reaches `n_env_steps`.
Dataset collect_demos(std::int64_t n_env_steps, std::uint64_t seed, const CollectOptions& options = {});

/// Closed-loop validation score: mean episode reward over the given suite
/// indices with seeds distinct from evaluation.
double validation_score(const PolicyNet& net, const std::vector<int>& scenarios, int seeds,
                        const EnvConfig& env_config = {});

/// Scenario subsets used by the generalization experiment.
std::vector<ScenarioSpec> suite_subset(const std::vector<ScenarioSpec>& suite, PathKind kind);

}  // namespace socnav
