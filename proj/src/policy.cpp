#include "socnav/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace socnav {

using nn::Matrix;
using nn::Tensor;

namespace {

// Inputs are given in meters; this keeps them near unit scale.
constexpr double kPositionScale = 0.25;
// Keeps squashed values strictly inside their open intervals even when tanh
// saturates to +-1 in floating point.
constexpr double kSquashShrink = 1.0 - 1e-9;

int argmax_lowest(const std::vector<double>& xs) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(xs.size()); ++i) {
    if (xs[static_cast<std::size_t>(i)] > xs[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

}  // namespace

std::string to_string(HeadKind k) {
  switch (k) {
    case HeadKind::hybrid: return "hybrid";
    case HeadKind::continuous: return "continuous";
    case HeadKind::discrete25: return "discrete25";
  }
  return "?";
}

HeadKind head_kind_from_string(const std::string& s) {
  if (s == "hybrid") return HeadKind::hybrid;
  if (s == "continuous") return HeadKind::continuous;
  if (s == "discrete25") return HeadKind::discrete25;
  throw std::invalid_argument("unknown head kind: " + s);
}

int hybrid_output_dim(int H) { return path_count(H) * (2 * H + 1); }

void PolicyConfig::validate() const {
  if (H < 1) throw std::invalid_argument("H must be >= 1");
  if (head_kind == HeadKind::discrete25 && H != 1) throw std::invalid_argument("discrete25 requires H = 1");
  if (d_pt < 1 || d_ha < 1 || d_pt > d_ha) throw std::invalid_argument("need 1 <= d_pt <= d_ha");
  if (attn_heads < 1 || d_ha % attn_heads != 0) throw std::invalid_argument("d_ha must divide into attn_heads");
  if (gru_hidden < 1 || pt_hidden < 1 || head_hidden < 1) throw std::invalid_argument("layer widths must be positive");
  if (!(limits.v_max > limits.v_min) || !(limits.w_max > 0.0)) throw std::invalid_argument("bad action limits");
}

int PolicyConfig::output_dim() const {
  switch (head_kind) {
    case HeadKind::hybrid: return hybrid_output_dim(H);
    case HeadKind::continuous: return 2 * H;
    case HeadKind::discrete25: return kDiscreteBins * kDiscreteBins;
  }
  return 0;
}

int discrete_cell(Action a, const ActionLimits& limits) {
  const double v_width = (limits.v_max - limits.v_min) / kDiscreteBins;
  const double w_width = 2.0 * limits.w_max / kDiscreteBins;
  const int vb = std::clamp(static_cast<int>(std::floor((a.v - limits.v_min) / v_width)), 0, kDiscreteBins - 1);
  const int wb = std::clamp(static_cast<int>(std::floor((a.w + limits.w_max) / w_width)), 0, kDiscreteBins - 1);
  return vb * kDiscreteBins + wb;
}

Action discrete_cell_center(int cell, const ActionLimits& limits) {
  const double v_width = (limits.v_max - limits.v_min) / kDiscreteBins;
  const double w_width = 2.0 * limits.w_max / kDiscreteBins;
  const int vb = cell / kDiscreteBins;
  const int wb = cell % kDiscreteBins;
  return {limits.v_min + (vb + 0.5) * v_width, -limits.w_max + (wb + 0.5) * w_width};
}

PolicyNet::PolicyNet(const PolicyConfig& config) : config_(config) {
  config_.validate();
  const auto& c = config_;
  pt_encoder_ = nn::Mlp::create(params_, "pt", {3 * kPathNodes, c.pt_hidden, c.d_pt});
  human_gru_ = nn::GruParams::create(params_, "gru_human", 2, c.gru_hidden);
  robot_gru_ = nn::GruParams::create(params_, "gru_robot", 2, c.gru_hidden);
  human_token_ = nn::Linear::create(params_, "token_human", c.gru_hidden, c.d_ha);
  robot_token_ = nn::Linear::create(params_, "token_robot", c.gru_hidden, c.d_ha);
  null_token_ = params_.add("null_token", 1, c.d_ha, nn::Init::xavier);
  self_attn_ = nn::AttentionParams::create(params_, "mhsa", c.d_ha);
  cross_attn_ = nn::AttentionParams::create(params_, "mhca", c.d_ha);
  head_ = nn::Mlp::create(params_, "head", {c.d_pt + c.d_ha, c.head_hidden, c.head_hidden, c.output_dim()});

  const int two_h = 2 * c.H;
  const double v_mid = 0.5 * (c.limits.v_max + c.limits.v_min);
  const double v_half = 0.5 * (c.limits.v_max - c.limits.v_min) * kSquashShrink;
  if (c.head_kind == HeadKind::hybrid) {
    const int paths = path_count(c.H);
    squash_scale_.resize(paths * two_h);
    squash_offset_.resize(paths * two_h);
    for (int j = 0; j < paths; ++j) {
      const auto digits = path_digits(j, c.H);
      for (int t = 0; t < c.H; ++t) {
        const int col = j * two_h + 2 * t;
        squash_scale_[col] = v_half;
        squash_offset_[col] = v_mid;
        squash_scale_[col + 1] = c.limits.w_max / 3.0 * kSquashShrink;
        squash_offset_[col + 1] = (digits[static_cast<std::size_t>(t)] - 1) * 2.0 * c.limits.w_max / 3.0;
      }
    }
  } else if (c.head_kind == HeadKind::continuous) {
    squash_scale_.resize(two_h);
    squash_offset_.resize(two_h);
    for (int t = 0; t < c.H; ++t) {
      squash_scale_[2 * t] = v_half;
      squash_offset_[2 * t] = v_mid;
      squash_scale_[2 * t + 1] = c.limits.w_max * kSquashShrink;
      squash_offset_[2 * t + 1] = 0.0;
    }
  }
}

Tensor PolicyNet::encode(std::span<const ModelState* const> states) const {
  const auto& c = config_;
  const auto batch = static_cast<Eigen::Index>(states.size());
  if (batch == 0) throw std::invalid_argument("encode: empty batch");
  constexpr int T = kHistoryLength;

  Matrix pt(batch, 3 * kPathNodes);
  Matrix robot_in = Matrix::Zero(batch, 2 * T);
  std::vector<int> robot_start(static_cast<std::size_t>(batch));
  Eigen::Index n_humans = 0;
  for (const auto* s : states) n_humans += static_cast<Eigen::Index>(s->ha.humans.size());
  Matrix human_in = Matrix::Zero(n_humans, 2 * T);
  std::vector<int> human_start(static_cast<std::size_t>(n_humans));

  // Token set per sample: the null token followed by its humans.
  std::vector<int> gather;
  std::vector<nn::AttentionSegment> self_segments;
  std::vector<nn::AttentionSegment> cross_segments;
  Eigen::Index h_row = 0;
  int token_row = 0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    const ModelState& s = *states[static_cast<std::size_t>(b)];
    for (int i = 0; i < kPathNodes; ++i) {
      const auto& n = s.pt.nodes[static_cast<std::size_t>(i)];
      pt(b, 3 * i) = n.x * kPositionScale;
      pt(b, 3 * i + 1) = n.y * kPositionScale;
      pt(b, 3 * i + 2) = n.theta;
    }
    const auto& rh = s.ha.robot_history;
    if (rh.empty() || rh.size() > static_cast<std::size_t>(T)) throw std::invalid_argument("robot history length must be in [1, 10]");
    const int r0 = T - static_cast<int>(rh.size());
    robot_start[static_cast<std::size_t>(b)] = r0;
    for (std::size_t i = 0; i < rh.size(); ++i) {
      robot_in(b, 2 * (r0 + static_cast<int>(i))) = rh[i].x * kPositionScale;
      robot_in(b, 2 * (r0 + static_cast<int>(i)) + 1) = rh[i].y * kPositionScale;
    }
    const int first = token_row;
    gather.push_back(0);
    for (const auto& track : s.ha.humans) {
      if (track.empty() || track.size() > static_cast<std::size_t>(T)) throw std::invalid_argument("human history length must be in [1, 10]");
      const int h0 = T - static_cast<int>(track.size());
      human_start[static_cast<std::size_t>(h_row)] = h0;
      for (std::size_t i = 0; i < track.size(); ++i) {
        human_in(h_row, 2 * (h0 + static_cast<int>(i))) = track[i].x * kPositionScale;
        human_in(h_row, 2 * (h0 + static_cast<int>(i)) + 1) = track[i].y * kPositionScale;
      }
      gather.push_back(1 + static_cast<int>(h_row));
      ++h_row;
    }
    token_row += 1 + static_cast<int>(s.ha.humans.size());
    self_segments.push_back({first, token_row, first, token_row});
    cross_segments.push_back({static_cast<int>(b), static_cast<int>(b) + 1, first, token_row});
  }

  const Tensor pt_embed = pt_encoder_(Tensor::constant(std::move(pt)));

  const Tensor robot_h = nn::gru_sequence(Tensor::constant(std::move(robot_in)), robot_start, T,
                                          robot_gru_.w_input, robot_gru_.w_hidden, robot_gru_.b_input,
                                          robot_gru_.b_hidden);
  const Tensor robot_tok = robot_token_(robot_h);

  Tensor token_pool = null_token_;
  if (n_humans > 0) {
    const Tensor human_h = nn::gru_sequence(Tensor::constant(std::move(human_in)), human_start, T,
                                            human_gru_.w_input, human_gru_.w_hidden,
                                            human_gru_.b_input, human_gru_.b_hidden);
    token_pool = nn::concat_rows({null_token_, human_token_(human_h)});
  }
  const Tensor tokens = nn::gather_rows(token_pool, gather);
  const Tensor mixed = nn::add(tokens, nn::mhsa(tokens, self_segments, self_attn_, c.attn_heads));
  const Tensor ha = nn::add(robot_tok, nn::mhca(robot_tok, mixed, cross_segments, cross_attn_, c.attn_heads));
  return nn::concat_cols({pt_embed, ha});
}

Tensor PolicyNet::head_raw(const Tensor& embedding) const { return head_(embedding); }

BatchOutput PolicyNet::squash(const Tensor& raw) const {
  const auto& c = config_;
  BatchOutput out;
  switch (c.head_kind) {
    case HeadKind::hybrid: {
      const int paths = path_count(c.H);
      out.logits = nn::slice_cols(raw, 0, paths);
      out.chunks = nn::affine_cols(nn::tanh(nn::slice_cols(raw, paths, paths * 2 * c.H)), squash_scale_,
                                   squash_offset_);
      break;
    }
    case HeadKind::continuous:
      out.chunks = nn::affine_cols(nn::tanh(raw), squash_scale_, squash_offset_);
      break;
    case HeadKind::discrete25:
      out.logits = raw;
      break;
  }
  return out;
}

BatchOutput PolicyNet::forward(std::span<const ModelState* const> states) const {
  return squash(head_raw(encode(states)));
}

PolicyOutput PolicyNet::infer(const ModelState& state) const {
  const ModelState* ptr = &state;
  const Tensor raw = head_raw(encode(std::span<const ModelState* const>(&ptr, 1)));
  return output_for_sample(squash(raw), config_, 0, &raw);
}

PolicyOutput output_for_sample(const BatchOutput& out, const PolicyConfig& cfg, Eigen::Index b,
                               const Tensor* raw) {
  PolicyOutput po;
  const int two_h = 2 * cfg.H;
  if (out.logits) {
    const auto row = out.logits.value().row(b);
    po.path_logits.assign(row.data(), row.data() + row.size());
    const double m = row.maxCoeff();
    double z = 0.0;
    for (double l : po.path_logits) z += std::exp(l - m);
    for (double l : po.path_logits) po.path_probs.push_back(std::exp(l - m) / z);
  }
  if (out.chunks) {
    const auto row = out.chunks.value().row(b);
    const int rows = static_cast<int>(row.size()) / two_h;
    for (int j = 0; j < rows; ++j) {
      po.chunks.emplace_back(row.data() + j * two_h, row.data() + (j + 1) * two_h);
    }
    if (raw) {
      const auto rrow = raw->value().row(b);
      const int skip = cfg.head_kind == HeadKind::hybrid ? path_count(cfg.H) : 0;
      for (int j = 0; j < rows; ++j) {
        po.raw_chunks.emplace_back(rrow.data() + skip + j * two_h, rrow.data() + skip + (j + 1) * two_h);
      }
    }
  }
  return po;
}

Action select_action(const PolicyOutput& out, const PolicyConfig& cfg) {
  return selected_plan(out, cfg).front();
}

std::vector<Action> selected_plan(const PolicyOutput& out, const PolicyConfig& cfg) {
  std::vector<Action> plan;
  switch (cfg.head_kind) {
    case HeadKind::hybrid: {
      const auto& chunk = out.chunks.at(static_cast<std::size_t>(argmax_lowest(out.path_probs)));
      for (std::size_t t = 0; t + 1 < chunk.size(); t += 2) plan.push_back({chunk[t], chunk[t + 1]});
      break;
    }
    case HeadKind::continuous: {
      const auto& chunk = out.chunks.at(0);
      for (std::size_t t = 0; t + 1 < chunk.size(); t += 2) plan.push_back({chunk[t], chunk[t + 1]});
      break;
    }
    case HeadKind::discrete25:
      plan.push_back(discrete_cell_center(argmax_lowest(out.path_logits), cfg.limits));
      break;
  }
  return plan;
}

}  // namespace socnav
