#include "socnav/tensor.hpp"

#include <cmath>
#include <unordered_set>

namespace socnav::nn {
namespace {

using Index = Eigen::Index;

// Scalar exp: the vectorized one clamps large negative inputs instead of
// underflowing to zero.
const auto exp_exact = [](double x) { return std::exp(x); };

void require_finite(const Matrix& m, const char* op) {
  if (!m.allFinite()) throw NonFiniteError(std::string("non-finite value produced by ") + op);
}

std::string shape_str(const Tensor& t) {
  return "(" + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + ")";
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
  }
}

std::shared_ptr<Node> make_node(Matrix value, std::vector<std::shared_ptr<Node>> parents,
                                const char* op) {
  require_finite(value, op);
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->is_leaf = false;
  for (const auto& p : parents) node->requires_grad = node->requires_grad || p->requires_grad;
  if (node->requires_grad) node->parents = std::move(parents);
  return node;
}

template <typename Expr>
void accumulate(Node* n, const Expr& g) {
  if (!n->requires_grad) return;
  if (n->grad.size() == 0) n->grad = Matrix::Zero(n->value.rows(), n->value.cols());
  n->grad += g;
}

}  // namespace

Tensor Tensor::constant(Matrix value) {
  require_finite(value, "constant");
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  return Tensor(node);
}

Tensor Tensor::parameter(Matrix value) {
  require_finite(value, "parameter");
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  return Tensor(node);
}

double Tensor::item() const {
  if (rows() != 1 || cols() != 1) throw ShapeError("item() on non-scalar tensor " + shape_str(*this));
  return value()(0, 0);
}

void backward(const Tensor& loss) {
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw ShapeError("backward() needs a scalar loss, got " + shape_str(loss));
  }
  Node* root = loss.node();
  if (!root->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack{{root, 0}};
  visited.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (Node* n : order) {
    if (!n->is_leaf) n->grad = Matrix::Zero(n->value.rows(), n->value.cols());
  }
  accumulate(root, Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward();
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ " + shape_str(a) + " * " + shape_str(b));
  }
  auto n = make_node(a.value() * b.value(), {a.shared(), b.shared()}, "matmul");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), pb = b.node()] {
      if (pa->requires_grad) accumulate(pa, self->grad * pb->value.transpose());
      if (pb->requires_grad) accumulate(pb, pa->value.transpose() * self->grad);
    };
  }
  return Tensor(n);
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  auto n = make_node(a.value() + b.value(), {a.shared(), b.shared()}, "add");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), pb = b.node()] {
      accumulate(pa, self->grad);
      accumulate(pb, self->grad);
    };
  }
  return Tensor(n);
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  auto n = make_node(a.value() - b.value(), {a.shared(), b.shared()}, "sub");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), pb = b.node()] {
      accumulate(pa, self->grad);
      accumulate(pb, -self->grad);
    };
  }
  return Tensor(n);
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  auto n = make_node(a.value().cwiseProduct(b.value()), {a.shared(), b.shared()}, "mul");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), pb = b.node()] {
      if (pa->requires_grad) accumulate(pa, self->grad.cwiseProduct(pb->value));
      if (pb->requires_grad) accumulate(pb, self->grad.cwiseProduct(pa->value));
    };
  }
  return Tensor(n);
}

Tensor scale(const Tensor& a, double s) {
  auto n = make_node(a.value() * s, {a.shared()}, "scale");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), s] { accumulate(pa, self->grad * s); };
  }
  return Tensor(n);
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw ShapeError("add_row: row " + shape_str(row) + " does not match " + shape_str(a));
  }
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  auto n = make_node(std::move(out), {a.shared(), row.shared()}, "add_row");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), pr = row.node()] {
      accumulate(pa, self->grad);
      if (pr->requires_grad) accumulate(pr, self->grad.colwise().sum());
    };
  }
  return Tensor(n);
}

Tensor affine_cols(const Tensor& a, const RowVector& c, const RowVector& d) {
  if (c.cols() != a.cols() || d.cols() != a.cols()) throw ShapeError("affine_cols: width mismatch");
  Matrix out = a.value().array().rowwise() * c.array();
  out.rowwise() += d;
  auto n = make_node(std::move(out), {a.shared()}, "affine_cols");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), c] {
      Matrix g = self->grad.array().rowwise() * c.array();
      accumulate(pa, g);
    };
  }
  return Tensor(n);
}

Tensor tanh(const Tensor& a) {
  auto n = make_node(a.value().array().tanh().matrix(), {a.shared()}, "tanh");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node()] {
      accumulate(pa, (self->grad.array() * (1.0 - self->value.array().square())).matrix());
    };
  }
  return Tensor(n);
}

Tensor sigmoid(const Tensor& a) {
  Matrix out = (1.0 + (-a.value().array()).exp()).inverse().matrix();
  auto n = make_node(std::move(out), {a.shared()}, "sigmoid");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node()] {
      const auto& s = self->value.array();
      accumulate(pa, (self->grad.array() * s * (1.0 - s)).matrix());
    };
  }
  return Tensor(n);
}

Tensor silu(const Tensor& a) {
  Matrix sig = (1.0 + (-a.value().array()).exp()).inverse().matrix();
  Matrix out = a.value().cwiseProduct(sig);
  auto n = make_node(std::move(out), {a.shared()}, "silu");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), sig = std::move(sig)] {
      const auto s = sig.array();
      const auto x = pa->value.array();
      accumulate(pa, (self->grad.array() * (s * (1.0 + x * (1.0 - s)))).matrix());
    };
  }
  return Tensor(n);
}

Tensor square(const Tensor& a) {
  auto n = make_node(a.value().array().square().matrix(), {a.shared()}, "square");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node()] {
      accumulate(pa, (2.0 * self->grad.array() * pa->value.array()).matrix());
    };
  }
  return Tensor(n);
}

Tensor softmax_rows(const Tensor& a) {
  Matrix out = a.value();
  for (Index i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    row.array() -= row.maxCoeff();
    row = row.unaryExpr(exp_exact);
    row /= row.sum();
  }
  auto n = make_node(std::move(out), {a.shared()}, "softmax_rows");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node()] {
      const Matrix& p = self->value;
      Eigen::VectorXd dots = (self->grad.cwiseProduct(p)).rowwise().sum();
      Matrix g = p.cwiseProduct(self->grad - dots.replicate(1, p.cols()));
      accumulate(pa, g);
    };
  }
  return Tensor(n);
}

Tensor log_softmax_rows(const Tensor& a) {
  Matrix out = a.value();
  for (Index i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    const double m = row.maxCoeff();
    const double lse = m + std::log((row.array() - m).unaryExpr(exp_exact).sum());
    row.array() -= lse;
  }
  auto n = make_node(std::move(out), {a.shared()}, "log_softmax_rows");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node()] {
      Matrix p = self->value.unaryExpr(exp_exact);
      Eigen::VectorXd gsum = self->grad.rowwise().sum();
      Matrix g = self->grad - p.cwiseProduct(gsum.replicate(1, p.cols()));
      accumulate(pa, g);
    };
  }
  return Tensor(n);
}

Tensor sum(const Tensor& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  auto n = make_node(std::move(out), {a.shared()}, "sum");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node()] {
      accumulate(pa, Matrix::Constant(pa->value.rows(), pa->value.cols(), self->grad(0, 0)));
    };
  }
  return Tensor(n);
}

Tensor mean(const Tensor& a) {
  const double count = static_cast<double>(a.value().size());
  return scale(sum(a), 1.0 / count);
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts[0].rows()) throw ShapeError("concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix out(parts[0].rows(), cols);
  std::vector<std::shared_ptr<Node>> parents;
  Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
    parents.push_back(p.shared());
  }
  auto n = make_node(std::move(out), parents, "concat_cols");
  if (n->requires_grad) {
    n->backward = [self = n.get(), parents] {
      Index c0 = 0;
      for (const auto& p : parents) {
        if (p->requires_grad) accumulate(p.get(), self->grad.middleCols(c0, p->value.cols()));
        c0 += p->value.cols();
      }
    };
  }
  return Tensor(n);
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != parts[0].cols()) throw ShapeError("concat_rows: column counts differ");
    rows += p.rows();
  }
  Matrix out(rows, parts[0].cols());
  std::vector<std::shared_ptr<Node>> parents;
  Index r = 0;
  for (const auto& p : parts) {
    out.middleRows(r, p.rows()) = p.value();
    r += p.rows();
    parents.push_back(p.shared());
  }
  auto n = make_node(std::move(out), parents, "concat_rows");
  if (n->requires_grad) {
    n->backward = [self = n.get(), parents] {
      Index r0 = 0;
      for (const auto& p : parents) {
        if (p->requires_grad) accumulate(p.get(), self->grad.middleRows(r0, p->value.rows()));
        r0 += p->value.rows();
      }
    };
  }
  return Tensor(n);
}

Tensor slice_cols(const Tensor& a, Index begin, Index count) {
  if (begin < 0 || count < 0 || begin + count > a.cols()) throw ShapeError("slice_cols: out of range");
  auto n = make_node(a.value().middleCols(begin, count), {a.shared()}, "slice_cols");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), begin, count] {
      if (pa->grad.size() == 0) pa->grad = Matrix::Zero(pa->value.rows(), pa->value.cols());
      pa->grad.middleCols(begin, count) += self->grad;
    };
  }
  return Tensor(n);
}

Tensor gather_rows(const Tensor& a, const std::vector<int>& index) {
  Matrix out(static_cast<Index>(index.size()), a.cols());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= a.rows()) throw ShapeError("gather_rows: index out of range");
    out.row(static_cast<Index>(i)) = a.value().row(index[i]);
  }
  auto n = make_node(std::move(out), {a.shared()}, "gather_rows");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), index] {
      if (pa->grad.size() == 0) pa->grad = Matrix::Zero(pa->value.rows(), pa->value.cols());
      for (std::size_t i = 0; i < index.size(); ++i) {
        pa->grad.row(index[i]) += self->grad.row(static_cast<Index>(i));
      }
    };
  }
  return Tensor(n);
}

Tensor pick(const Tensor& a, const std::vector<int>& index) {
  if (static_cast<Index>(index.size()) != a.rows()) throw ShapeError("pick: one index per row required");
  Matrix out(a.rows(), 1);
  for (Index i = 0; i < a.rows(); ++i) {
    const int j = index[static_cast<std::size_t>(i)];
    if (j < 0 || j >= a.cols()) throw ShapeError("pick: index out of range");
    out(i, 0) = a.value()(i, j);
  }
  auto n = make_node(std::move(out), {a.shared()}, "pick");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pa = a.node(), index] {
      if (pa->grad.size() == 0) pa->grad = Matrix::Zero(pa->value.rows(), pa->value.cols());
      for (Index i = 0; i < pa->value.rows(); ++i) {
        pa->grad(i, index[static_cast<std::size_t>(i)]) += self->grad(i, 0);
      }
    };
  }
  return Tensor(n);
}

// ---------------------------------------------------------------------------
// Fused GRU

namespace {

struct GruTape {
  int steps = 0;
  Index in = 0;
  Index hidden = 0;
  std::vector<int> start;
  std::vector<Matrix> h_prev, r, z, cand, gh_cand;
};

Matrix sigmoid_of(const Matrix& x) { return (1.0 + (-x.array()).exp()).inverse().matrix(); }

}  // namespace

Tensor gru_sequence(const Tensor& inputs, const std::vector<int>& start, int steps,
                    const Tensor& w_input, const Tensor& w_hidden, const Tensor& b_input,
                    const Tensor& b_hidden) {
  const Index n_rows = inputs.rows();
  const Index hidden = w_hidden.rows();
  if (steps <= 0 || inputs.cols() % steps != 0) throw ShapeError("gru_sequence: inputs not divisible by steps");
  const Index in = inputs.cols() / steps;
  if (w_input.rows() != in || w_input.cols() != 3 * hidden || w_hidden.cols() != 3 * hidden ||
      b_input.rows() != 1 || b_input.cols() != 3 * hidden || b_hidden.rows() != 1 ||
      b_hidden.cols() != 3 * hidden) {
    throw ShapeError("gru_sequence: parameter shapes inconsistent with hidden size " +
                     std::to_string(hidden));
  }
  if (static_cast<Index>(start.size()) != n_rows) throw ShapeError("gru_sequence: one start per row");

  auto tape = std::make_shared<GruTape>();
  tape->steps = steps;
  tape->in = in;
  tape->hidden = hidden;
  tape->start = start;

  Matrix h = Matrix::Zero(n_rows, hidden);
  const Matrix& wx = w_input.value();
  const Matrix& wh = w_hidden.value();
  const RowVector bx = b_input.value().row(0);
  const RowVector bh = b_hidden.value().row(0);
  for (int t = 0; t < steps; ++t) {
    Matrix gx = inputs.value().middleCols(t * in, in) * wx;
    gx.rowwise() += bx;
    Matrix gh = h * wh;
    gh.rowwise() += bh;
    Matrix r = sigmoid_of(gx.leftCols(hidden) + gh.leftCols(hidden));
    Matrix z = sigmoid_of(gx.middleCols(hidden, hidden) + gh.middleCols(hidden, hidden));
    Matrix gh_cand = gh.rightCols(hidden);
    Matrix cand = (gx.rightCols(hidden) + r.cwiseProduct(gh_cand)).array().tanh().matrix();
    Matrix h_new = h + z.cwiseProduct(cand - h);
    for (Index i = 0; i < n_rows; ++i) {
      if (t < start[static_cast<std::size_t>(i)]) h_new.row(i) = h.row(i);
    }
    tape->h_prev.push_back(std::move(h));
    tape->r.push_back(std::move(r));
    tape->z.push_back(std::move(z));
    tape->cand.push_back(std::move(cand));
    tape->gh_cand.push_back(std::move(gh_cand));
    h = std::move(h_new);
  }

  auto n = make_node(std::move(h),
                     {inputs.shared(), w_input.shared(), w_hidden.shared(), b_input.shared(),
                      b_hidden.shared()},
                     "gru_sequence");
  if (n->requires_grad) {
    n->backward = [self = n.get(), px = inputs.node(), pwx = w_input.node(), pwh = w_hidden.node(),
                   pbx = b_input.node(), pbh = b_hidden.node(), tape] {
      const Index hid = tape->hidden;
      const Index rows = self->value.rows();
      Matrix dh = self->grad;
      Matrix dwx = Matrix::Zero(pwx->value.rows(), pwx->value.cols());
      Matrix dwh = Matrix::Zero(pwh->value.rows(), pwh->value.cols());
      RowVector dbx = RowVector::Zero(3 * hid);
      RowVector dbh = RowVector::Zero(3 * hid);
      Matrix dx;
      if (px->requires_grad) dx = Matrix::Zero(px->value.rows(), px->value.cols());
      for (int t = tape->steps - 1; t >= 0; --t) {
        const auto ts = static_cast<std::size_t>(t);
        const Matrix& hp = tape->h_prev[ts];
        const Matrix& r = tape->r[ts];
        const Matrix& z = tape->z[ts];
        const Matrix& cand = tape->cand[ts];
        const Matrix& ghc = tape->gh_cand[ts];

        Matrix active = Matrix::Zero(rows, 1);
        for (Index i = 0; i < rows; ++i) active(i, 0) = t >= tape->start[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
        const Matrix dh_act = dh.array().colwise() * active.col(0).array();

        const Matrix d_cand_pre =
            (dh_act.array() * z.array() * (1.0 - cand.array().square())).matrix();
        const Matrix d_z_pre =
            (dh_act.array() * (cand - hp).array() * z.array() * (1.0 - z.array())).matrix();
        const Matrix d_r_pre =
            (d_cand_pre.array() * ghc.array() * r.array() * (1.0 - r.array())).matrix();

        Matrix dgx(rows, 3 * hid);
        dgx << d_r_pre, d_z_pre, d_cand_pre;
        Matrix dgh(rows, 3 * hid);
        dgh << d_r_pre, d_z_pre, d_cand_pre.cwiseProduct(r);

        const auto x_t = px->value.middleCols(t * tape->in, tape->in);
        dwx.noalias() += x_t.transpose() * dgx;
        dwh.noalias() += hp.transpose() * dgh;
        dbx += dgx.colwise().sum();
        dbh += dgh.colwise().sum();
        if (px->requires_grad) dx.middleCols(t * tape->in, tape->in) = dgx * pwx->value.transpose();

        // Inactive rows pass the gradient through unchanged.
        Matrix dh_prev = dh_act.cwiseProduct((1.0 - z.array()).matrix()) + dgh * pwh->value.transpose();
        for (Index i = 0; i < rows; ++i) {
          if (active(i, 0) == 0.0) dh_prev.row(i) = dh.row(i);
        }
        dh = std::move(dh_prev);
      }
      accumulate(pwx, dwx);
      accumulate(pwh, dwh);
      accumulate(pbx, dbx);
      accumulate(pbh, dbh);
      if (px->requires_grad) accumulate(px, dx);
    };
  }
  return Tensor(n);
}

// ---------------------------------------------------------------------------
// Segmented multi-head attention

Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v,
                 const std::vector<AttentionSegment>& segments, int heads) {
  const Index d = q.cols();
  if (k.cols() != d || v.cols() != d) throw ShapeError("attention: q, k, v widths differ");
  if (k.rows() != v.rows()) throw ShapeError("attention: k and v row counts differ");
  if (heads <= 0 || d % heads != 0) throw ShapeError("attention: width not divisible by heads");
  const Index dh = d / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

  auto probs = std::make_shared<std::vector<Matrix>>();
  probs->reserve(segments.size() * static_cast<std::size_t>(heads));
  Matrix out = Matrix::Zero(q.rows(), d);
  for (const auto& s : segments) {
    const Index nq = s.q_end - s.q_begin;
    const Index nk = s.k_end - s.k_begin;
    if (nq <= 0 || nk <= 0 || s.q_end > q.rows() || s.k_end > k.rows()) {
      throw ShapeError("attention: empty or out-of-range segment");
    }
    for (int hd = 0; hd < heads; ++hd) {
      const auto qh = q.value().block(s.q_begin, hd * dh, nq, dh);
      const auto kh = k.value().block(s.k_begin, hd * dh, nk, dh);
      const auto vh = v.value().block(s.k_begin, hd * dh, nk, dh);
      Matrix p = (qh * kh.transpose()) * inv_sqrt;
      for (Index i = 0; i < nq; ++i) {
        auto row = p.row(i);
        row.array() -= row.maxCoeff();
        row = row.unaryExpr(exp_exact);
        row /= row.sum();
      }
      out.block(s.q_begin, hd * dh, nq, dh) = p * vh;
      probs->push_back(std::move(p));
    }
  }

  auto n = make_node(std::move(out), {q.shared(), k.shared(), v.shared()}, "attention");
  if (n->requires_grad) {
    n->backward = [self = n.get(), pq = q.node(), pk = k.node(), pv = v.node(), segments, heads,
                   dh, inv_sqrt, probs] {
      Matrix dq = Matrix::Zero(pq->value.rows(), pq->value.cols());
      Matrix dk = Matrix::Zero(pk->value.rows(), pk->value.cols());
      Matrix dv = Matrix::Zero(pv->value.rows(), pv->value.cols());
      std::size_t idx = 0;
      for (const auto& s : segments) {
        const Index nq = s.q_end - s.q_begin;
        const Index nk = s.k_end - s.k_begin;
        for (int hd = 0; hd < heads; ++hd) {
          const Matrix& p = (*probs)[idx++];
          const auto qh = pq->value.block(s.q_begin, hd * dh, nq, dh);
          const auto kh = pk->value.block(s.k_begin, hd * dh, nk, dh);
          const auto vh = pv->value.block(s.k_begin, hd * dh, nk, dh);
          const auto go = self->grad.block(s.q_begin, hd * dh, nq, dh);
          dv.block(s.k_begin, hd * dh, nk, dh) += p.transpose() * go;
          const Matrix dp = go * vh.transpose();
          const Eigen::VectorXd dots = dp.cwiseProduct(p).rowwise().sum();
          const Matrix ds = p.cwiseProduct(dp - dots.replicate(1, nk)) * inv_sqrt;
          dq.block(s.q_begin, hd * dh, nq, dh) += ds * kh;
          dk.block(s.k_begin, hd * dh, nk, dh) += ds.transpose() * qh;
        }
      }
      accumulate(pq, dq);
      accumulate(pk, dk);
      accumulate(pv, dv);
    };
  }
  return Tensor(n);
}

}  // namespace socnav::nn
