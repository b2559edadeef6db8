#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socnav/params.hpp"
#include "socnav/policy.hpp"
#include "socnav/rng.hpp"
#include "socnav/state.hpp"

namespace socnav {

struct TrainConfig {
  double lr = 1e-4;
  double weight_decay = 5e-3;
  nn::OptimizerKind optimizer = nn::OptimizerKind::adamw;
  int batch_size = 256;
  std::int64_t total_steps = 2'000'000;
  std::int64_t perturb_period = 50'000;
  double perturb_mix = 0.3;
  double perturb_decay = 0.9;
  std::int64_t decay_onset = 750'000;
  double w_d = 1.0;
  bool flip_aug = true;
  bool perturb = true;
  bool reset_to_best = true;
  /// Multiplies total_steps, perturb_period and decay_onset together.
  double scale = 1.0;
  PolicyConfig policy;
  /// Indices into build_suite() used for closed-loop validation. The default
  /// takes the sparse, middle and densest crowd of each path kind.
  std::vector<int> validation_scenarios{0, 4, 8, 9, 13, 17, 18, 22, 26};
  int validation_seeds = 2;
  std::uint64_t seed = 0;
  int log_every = 100;

  std::int64_t scaled_total() const;
  std::int64_t scaled_period() const;
  std::int64_t scaled_onset() const;
  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// Flat JSON object; every field is addressable by name.
std::string to_json(const TrainConfig& cfg);
/// Starts from `base` and applies the keys present in `json`. Unknown keys
/// are an error.
TrainConfig train_config_from_json(const std::string& json, const TrainConfig& base = {});
TrainConfig load_train_config(const std::filesystem::path& path, const TrainConfig& base = {});
/// Stable 64-bit FNV-1a hash of to_json(cfg), as 16 hex digits.
std::string config_hash(const TrainConfig& cfg);
std::string fnv1a_hex(const std::string& text);

/// Mix applied at `step`, or nothing when `step` is not a period boundary.
std::optional<double> perturb_schedule(std::int64_t step, const TrainConfig& cfg);

/// w <- (1 - mix) w + mix w_rand for a freshly initialized network, then
/// clears the optimizer moments.
void perturb_weights(nn::ParamStore& store, Rng& rng, double mix);

/// Closed-loop score of the current weights; larger is better.
using Validator = std::function<double(const PolicyNet&)>;

struct ValidationRecord {
  std::int64_t step = 0;
  double score = 0.0;
  std::optional<double> mix_applied;
  bool new_best = false;
};

struct TrainResult {
  std::vector<nn::Matrix> best_params;
  double best_score = 0.0;
  std::int64_t best_step = 0;
  /// One entry per optimizer step.
  std::vector<double> losses;
  std::vector<ValidationRecord> validations;
};

struct TrainOptions {
  /// Receives the append-only JSON-lines training log.
  std::ostream* log = nullptr;
};

/// Per-sample training targets for a given head.
struct Targets {
  nn::Matrix chunk;  // B x 2H
  std::vector<int> path_index;
  std::vector<int> cell;
};

Targets make_targets(std::span<const Transition* const> batch, const PolicyConfig& cfg);

/// Loss of the configured head on a batch.
nn::Tensor batch_loss(const PolicyNet& net, std::span<const Transition* const> batch, double w_d);

/// Behaviour cloning with periodic validation, optional reset-to-best and
/// weight perturbation. Returns the best validated weights.
TrainResult train(const TrainConfig& cfg, const Dataset& data, const Validator& validate,
                  const TrainOptions& options = {});

/// Builds a network for `cfg` and loads `params` into it.
PolicyNet make_policy(const PolicyConfig& cfg, const std::vector<nn::Matrix>& params);

/// Writes a checkpoint whose metadata carries the full training config.
void save_policy(const PolicyNet& net, const TrainConfig& cfg, double score, std::int64_t step,
                 const std::filesystem::path& path);
struct LoadedPolicy {
  TrainConfig config;
  PolicyNet net;
  double score = 0.0;
};
LoadedPolicy load_policy(const std::filesystem::path& path);

}  // namespace socnav
