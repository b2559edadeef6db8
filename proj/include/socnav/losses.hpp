#pragma once

#include <vector>

#include "socnav/tensor.hpp"

namespace socnav {

/// Batch mean of -log softmax(logits)[target].
nn::Tensor loss_discrete(const nn::Tensor& logits, const std::vector<int>& targets);

/// Batch mean of the squared L2 distance between rows.
nn::Tensor loss_continuous(const nn::Tensor& pred, const nn::Matrix& target);

/// Batch mean of -w_d log p_i + sum_j p_j ||A[j] - a*||^2, where p is the
/// softmax of `logits` (B x P) and `chunks` holds P blocks of 2H columns.
/// Gradients flow through both p and A.
nn::Tensor loss_hybrid(const nn::Tensor& logits, const nn::Tensor& chunks, const nn::Matrix& target,
                       const std::vector<int>& target_index, double w_d);

}  // namespace socnav
