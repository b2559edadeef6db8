#pragma once

#include <string>
#include <vector>

#include "socnav/params.hpp"
#include "socnav/tensor.hpp"

namespace socnav::nn {

struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out

  static Linear create(ParamStore& store, const std::string& name, Eigen::Index in, Eigen::Index out);
  Tensor operator()(const Tensor& x) const;
};

/// Linear layers with SiLU between them and no activation on the output.
struct Mlp {
  std::vector<Linear> layers;

  static Mlp create(ParamStore& store, const std::string& name, const std::vector<Eigen::Index>& widths);
  Tensor operator()(const Tensor& x) const;
};

struct GruParams {
  Tensor w_input;   // in x 3h, columns [r | z | n]
  Tensor w_hidden;  // h x 3h
  Tensor b_input;   // 1 x 3h
  Tensor b_hidden;  // 1 x 3h

  static GruParams create(ParamStore& store, const std::string& name, Eigen::Index in, Eigen::Index hidden);
  Eigen::Index hidden() const { return w_hidden.rows(); }
};

/// Single GRU step built from primitive ops; `gru_sequence` is the fused
/// equivalent used for whole histories.
Tensor gru_cell(const Tensor& x, const Tensor& h, const GruParams& p);

struct AttentionParams {
  Tensor w_query, w_key, w_value, w_out;  // d x d each

  static AttentionParams create(ParamStore& store, const std::string& name, Eigen::Index dim);
};

/// Multi-head self-attention within each token segment.
Tensor mhsa(const Tensor& tokens, const std::vector<AttentionSegment>& segments,
            const AttentionParams& p, int heads);
/// Multi-head cross-attention: query rows attend to their segment of keys.
Tensor mhca(const Tensor& queries, const Tensor& keys, const std::vector<AttentionSegment>& segments,
            const AttentionParams& p, int heads);

}  // namespace socnav::nn
