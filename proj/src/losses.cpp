#include "socnav/losses.hpp"

namespace socnav {

using nn::Matrix;
using nn::Tensor;

Tensor loss_discrete(const Tensor& logits, const std::vector<int>& targets) {
  return nn::scale(nn::mean(nn::pick(nn::log_softmax_rows(logits), targets)), -1.0);
}

Tensor loss_continuous(const Tensor& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw nn::ShapeError("loss_continuous: prediction and target shapes differ");
  }
  const Tensor diff = nn::sub(pred, Tensor::constant(target));
  return nn::scale(nn::sum(nn::square(diff)), 1.0 / static_cast<double>(pred.rows()));
}

Tensor loss_hybrid(const Tensor& logits, const Tensor& chunks, const Matrix& target,
                   const std::vector<int>& target_index, double w_d) {
  const Eigen::Index batch = logits.rows();
  const Eigen::Index paths = logits.cols();
  const Eigen::Index width = target.cols();
  if (chunks.rows() != batch || target.rows() != batch || chunks.cols() != paths * width) {
    throw nn::ShapeError("loss_hybrid: logits, chunks and targets disagree");
  }
  const Tensor nll = nn::scale(nn::mean(nn::pick(nn::log_softmax_rows(logits), target_index)), -w_d);

  Matrix tiled = target.replicate(1, paths);
  Matrix block_sum = Matrix::Zero(paths * width, paths);
  for (Eigen::Index j = 0; j < paths; ++j) block_sum.block(j * width, j, width, 1).setOnes();
  const Tensor sq = nn::square(nn::sub(chunks, Tensor::constant(std::move(tiled))));
  const Tensor per_path = nn::matmul(sq, Tensor::constant(std::move(block_sum)));
  const Tensor weighted = nn::mul(nn::softmax_rows(logits), per_path);
  const Tensor mse = nn::scale(nn::sum(weighted), 1.0 / static_cast<double>(batch));
  return nn::add(nll, mse);
}

}  // namespace socnav
