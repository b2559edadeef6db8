#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace socnav::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node {
  Matrix value;
  Matrix grad;
  bool requires_grad = false;
  bool is_leaf = true;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void()> backward;
};

/// Handle to a node of the recorded computation. Copies share the node.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor constant(Matrix value);
  /// Leaf whose gradient is accumulated by backward().
  static Tensor parameter(Matrix value);

  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  /// Empty until a backward pass reaches this tensor.
  const Matrix& grad() const { return node_->grad; }
  Matrix& mutable_grad() { return node_->grad; }
  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  bool requires_grad() const { return node_->requires_grad; }
  double item() const;
  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& shared() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

 private:
  std::shared_ptr<Node> node_;
};

/// Reverse pass from a 1x1 tensor. Parameter gradients accumulate across
/// calls; intermediate gradients are recomputed each time.
void backward(const Tensor& loss);

// Elementwise and linear algebra.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
/// a + row, with `row` (1 x cols) broadcast over rows.
Tensor add_row(const Tensor& a, const Tensor& row);
/// a * c + d per column, for constant rows c and d.
Tensor affine_cols(const Tensor& a, const RowVector& c, const RowVector& d);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor silu(const Tensor& a);
Tensor square(const Tensor& a);
Tensor softmax_rows(const Tensor& a);
Tensor log_softmax_rows(const Tensor& a);

// Reductions and reshaping.
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor slice_cols(const Tensor& a, Eigen::Index begin, Eigen::Index count);
Tensor gather_rows(const Tensor& a, const std::vector<int>& index);
/// out[i] = a[i, index[i]] as an N x 1 column.
Tensor pick(const Tensor& a, const std::vector<int>& index);

/// Fused GRU over right-aligned sequences. `inputs` is N x (T * in), step
/// major; row n is active from step `start[n]` on and the hidden state is
/// held (initially zero) before that. Gates: r, z sigmoid; candidate tanh;
/// h' = (1 - z) h + z h~. Weight columns are ordered [r | z | n].
Tensor gru_sequence(const Tensor& inputs, const std::vector<int>& start, int steps,
                    const Tensor& w_input, const Tensor& w_hidden, const Tensor& b_input,
                    const Tensor& b_hidden);

/// Query rows [q_begin, q_end) attend to key rows [k_begin, k_end).
struct AttentionSegment {
  int q_begin, q_end, k_begin, k_end;
};

/// Scaled dot-product attention with `heads` equal column blocks.
Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v,
                 const std::vector<AttentionSegment>& segments, int heads);

}  // namespace socnav::nn
