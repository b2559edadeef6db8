#pragma once

#include <span>
#include <string>
#include <vector>

#include "socnav/geometry.hpp"
#include "socnav/layers.hpp"
#include "socnav/params.hpp"
#include "socnav/state.hpp"

namespace socnav {

enum class HeadKind { hybrid, continuous, discrete25 };

std::string to_string(HeadKind k);
HeadKind head_kind_from_string(const std::string& s);

struct PolicyConfig {
  int H = 3;
  int d_pt = 16;
  int d_ha = 128;
  int gru_hidden = 64;
  int attn_heads = 2;
  int pt_hidden = 64;
  int head_hidden = 128;
  HeadKind head_kind = HeadKind::hybrid;
  ActionLimits limits;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  /// Number of raw network outputs for this head.
  int output_dim() const;
};

/// 3^H * (2H + 1).
int hybrid_output_dim(int H);

/// Grid used by the discrete head: 5 equal speed bins x 5 equal turn-rate
/// bins, cell = v_bin * 5 + w_bin.
inline constexpr int kDiscreteBins = 5;
int discrete_cell(Action a, const ActionLimits& limits);
Action discrete_cell_center(int cell, const ActionLimits& limits);

/// Network outputs for a batch. `logits` holds path (hybrid) or grid-cell
/// (discrete) logits; `chunks` the squashed action chunks, one 2H block per
/// path for the hybrid head.
struct BatchOutput {
  nn::Tensor logits;
  nn::Tensor chunks;
};

/// Per-sample view of a policy output.
struct PolicyOutput {
  std::vector<double> path_logits;
  std::vector<double> path_probs;
  /// Pre-squash values, one 2H row per path (one row for continuous).
  std::vector<std::vector<double>> raw_chunks;
  std::vector<std::vector<double>> chunks;
};

class PolicyNet {
 public:
  explicit PolicyNet(const PolicyConfig& config);

  const PolicyConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  /// Fused path + human embedding, (B x (d_pt + d_ha)).
  nn::Tensor encode(std::span<const ModelState* const> states) const;
  nn::Tensor head_raw(const nn::Tensor& embedding) const;
  BatchOutput forward(std::span<const ModelState* const> states) const;
  /// Splits raw head outputs into logits and squashed chunks.
  BatchOutput squash(const nn::Tensor& raw) const;

  PolicyOutput infer(const ModelState& state) const;

 private:
  PolicyConfig config_;
  nn::ParamStore params_;
  nn::Mlp pt_encoder_;
  nn::GruParams human_gru_;
  nn::GruParams robot_gru_;
  nn::Linear human_token_;
  nn::Linear robot_token_;
  nn::Tensor null_token_;
  nn::AttentionParams self_attn_;
  nn::AttentionParams cross_attn_;
  nn::Mlp head_;
  nn::RowVector squash_scale_;
  nn::RowVector squash_offset_;
};

PolicyOutput output_for_sample(const BatchOutput& out, const PolicyConfig& cfg, Eigen::Index b,
                               const nn::Tensor* raw = nullptr);

/// First action of the most likely path (hybrid), of the chunk
/// (continuous), or the center of the most likely cell (discrete). Ties
/// resolve to the lowest index.
Action select_action(const PolicyOutput& out, const PolicyConfig& cfg);

/// The planned chunk that select_action commits to, as (v, w) pairs.
std::vector<Action> selected_plan(const PolicyOutput& out, const PolicyConfig& cfg);

}  // namespace socnav
