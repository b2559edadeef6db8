#include "socnav/gradcheck.hpp"

#include <cmath>

#include "socnav/layers.hpp"
#include "socnav/losses.hpp"
#include "socnav/trainer.hpp"

namespace socnav {

using nn::Matrix;
using nn::Tensor;

double gradcheck(const std::function<Tensor()>& loss, const std::vector<Tensor>& params, double eps) {
  for (Tensor p : params) p.mutable_grad() = Matrix();
  nn::backward(loss());

  double worst = 0.0;
  for (const auto& cp : params) {
    Tensor p = cp;
    const Matrix analytic = p.grad().size() ? p.grad() : Matrix::Zero(p.rows(), p.cols());
    Matrix numeric(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.value().size(); ++i) {
      double& x = p.mutable_value().data()[i];
      const double saved = x;
      x = saved + eps;
      const double up = loss().item();
      x = saved - eps;
      const double down = loss().item();
      x = saved;
      numeric.data()[i] = (up - down) / (2.0 * eps);
    }
    const double denom = analytic.norm() + numeric.norm();
    if (denom > 0.0) worst = std::max(worst, (analytic - numeric).norm() / denom);
  }
  return worst;
}

ModelState random_model_state(Rng& rng, int n_humans) {
  ModelState s;
  for (int i = 0; i < kPathNodes; ++i) {
    s.pt.nodes[static_cast<std::size_t>(i)] = {0.3 * i + rng.uniform(-0.1, 0.1), rng.uniform(-0.5, 0.5),
                                               rng.uniform(-0.5, 0.5)};
  }
  const int robot_len = 1 + static_cast<int>(rng.below(kHistoryLength));
  for (int i = 0; i < robot_len; ++i) s.ha.robot_history.push_back({-0.25 * (robot_len - 1 - i), rng.uniform(-0.1, 0.1)});
  for (int h = 0; h < n_humans; ++h) {
    const int len = 1 + static_cast<int>(rng.below(kHistoryLength));
    Vec2 p{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    const Vec2 v{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
    std::vector<Vec2> track;
    for (int i = 0; i < len; ++i) {
      track.push_back(p);
      p += v;
    }
    s.ha.humans.push_back(std::move(track));
  }
  return s;
}

namespace {

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-scale, scale);
  return m;
}

Tensor param(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  return Tensor::parameter(random_matrix(rng, r, c, scale));
}

// Contracts an arbitrary output with fixed random weights so every entry of
// the output contributes to the scalar.
Tensor probe(const Tensor& out, Rng& rng) {
  return nn::sum(nn::mul(out, Tensor::constant(random_matrix(rng, out.rows(), out.cols()))));
}

std::vector<Tensor> store_params(const nn::ParamStore& store) {
  std::vector<Tensor> out;
  for (const auto& e : store.entries()) out.push_back(e.tensor);
  return out;
}

std::vector<Transition> random_batch(Rng& rng, const PolicyConfig& cfg, int batch) {
  std::vector<Transition> out;
  for (int b = 0; b < batch; ++b) {
    Transition t;
    t.state = random_model_state(rng, static_cast<int>(rng.below(4)));
    for (int k = 0; k < cfg.H; ++k) {
      t.chunk.push_back(rng.uniform(cfg.limits.v_min, cfg.limits.v_max));
      t.chunk.push_back(rng.uniform(-cfg.limits.w_max, cfg.limits.w_max));
    }
    t.path_index = omega_bins(t.chunk, cfg.limits.w_max).path_index;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<GradcheckResult> run_gradchecks(double tolerance, std::uint64_t seed) {
  Rng rng(derive_seed({seed, 0x9cec}));
  std::vector<GradcheckResult> results;
  auto check = [&](const std::string& name, const std::function<Tensor()>& f, const std::vector<Tensor>& params) {
    const double err = gradcheck(f, params);
    results.push_back({name, err, err < tolerance});
  };

  {
    const Tensor a = param(rng, 3, 4), b = param(rng, 4, 2), c = param(rng, 3, 2);
    const Tensor row = param(rng, 1, 2);
    Rng pr = rng;
    check("matmul/add/sub/mul/add_row", [=]() {
      Rng r = pr;
      const Tensor ab = nn::matmul(a, b);
      return probe(nn::add_row(nn::mul(nn::sub(ab, c), nn::add(ab, c)), row), r);
    }, {a, b, c, row});
  }
  {
    const Tensor x = param(rng, 3, 5, 2.0);
    nn::RowVector scale_row = random_matrix(rng, 1, 5);
    nn::RowVector offset_row = random_matrix(rng, 1, 5);
    Rng pr = rng;
    check("elementwise", [=]() {
      Rng r = pr;
      const Tensor y = nn::concat_cols({nn::tanh(x), nn::sigmoid(x), nn::silu(x), nn::square(x),
                                        nn::scale(x, -1.5), nn::affine_cols(nn::tanh(x), scale_row, offset_row)});
      return probe(y, r);
    }, {x});
  }
  {
    const Tensor x = param(rng, 4, 6, 2.0);
    const std::vector<int> idx{5, 0, 3, 3};
    Rng pr = rng;
    check("softmax/log_softmax/pick", [=]() {
      Rng r = pr;
      return nn::add(probe(nn::softmax_rows(x), r), nn::add(probe(nn::log_softmax_rows(x), r), nn::sum(nn::pick(x, idx))));
    }, {x});
  }
  {
    const Tensor a = param(rng, 2, 3), b = param(rng, 3, 3);
    const std::vector<int> gather{4, 0, 0, 2};
    Rng pr = rng;
    check("concat/slice/gather/mean", [=]() {
      Rng r = pr;
      const Tensor rows = nn::concat_rows({a, b});
      return nn::add(probe(nn::gather_rows(rows, gather), r), nn::mean(nn::square(nn::slice_cols(rows, 1, 2))));
    }, {a, b});
  }
  {
    nn::ParamStore store;
    Rng init(derive_seed({seed, 1}));
    const auto lin = nn::Linear::create(store, "lin", 5, 4);
    store.initialize(init);
    for (auto& e : store.entries()) e.tensor.mutable_value() += random_matrix(rng, e.tensor.rows(), e.tensor.cols(), 0.1);
    const Tensor x = Tensor::constant(random_matrix(rng, 3, 5));
    Rng pr = rng;
    check("linear", [=]() {
      Rng r = pr;
      return probe(lin(x), r);
    }, store_params(store));
  }
  {
    nn::ParamStore store;
    Rng init(derive_seed({seed, 2}));
    const auto mlp = nn::Mlp::create(store, "mlp", {5, 7, 6, 3});
    store.initialize(init);
    for (auto& e : store.entries()) e.tensor.mutable_value() += random_matrix(rng, e.tensor.rows(), e.tensor.cols(), 0.1);
    const Tensor x = param(rng, 4, 5);
    Rng pr = rng;
    auto params = store_params(store);
    params.push_back(x);
    check("mlp", [=]() {
      Rng r = pr;
      return probe(mlp(x), r);
    }, params);
  }
  {
    nn::ParamStore store;
    Rng init(derive_seed({seed, 3}));
    const auto gru = nn::GruParams::create(store, "gru", 2, 5);
    store.initialize(init);
    for (auto& e : store.entries()) e.tensor.mutable_value() += random_matrix(rng, e.tensor.rows(), e.tensor.cols(), 0.2);
    const Tensor x = param(rng, 3, 2);
    const Tensor h = param(rng, 3, 5, 0.5);
    Rng pr = rng;
    auto params = store_params(store);
    params.push_back(x);
    params.push_back(h);
    check("gru_cell", [=]() {
      Rng r = pr;
      return probe(nn::gru_cell(x, h, gru), r);
    }, params);

    const Tensor seq = param(rng, 3, 2 * 6);
    const std::vector<int> start{0, 2, 5};
    params = store_params(store);
    params.push_back(seq);
    check("gru_sequence", [=]() {
      Rng r = pr;
      return probe(nn::gru_sequence(seq, start, 6, gru.w_input, gru.w_hidden, gru.b_input, gru.b_hidden), r);
    }, params);
  }
  {
    const Tensor q = param(rng, 5, 4), k = param(rng, 6, 4), v = param(rng, 6, 4);
    const std::vector<nn::AttentionSegment> segs{{0, 2, 0, 3}, {2, 5, 3, 6}};
    Rng pr = rng;
    check("attention", [=]() {
      Rng r = pr;
      return probe(nn::attention(q, k, v, segs, 2), r);
    }, {q, k, v});
  }
  {
    nn::ParamStore store;
    Rng init(derive_seed({seed, 4}));
    const auto self_attn = nn::AttentionParams::create(store, "mhsa", 4);
    const auto cross_attn = nn::AttentionParams::create(store, "mhca", 4);
    store.initialize(init);
    const Tensor tokens = param(rng, 5, 4);
    const Tensor queries = param(rng, 2, 4);
    const std::vector<nn::AttentionSegment> self_segs{{0, 1, 0, 1}, {1, 5, 1, 5}};
    const std::vector<nn::AttentionSegment> cross_segs{{0, 1, 0, 1}, {1, 2, 1, 5}};
    Rng pr = rng;
    auto params = store_params(store);
    params.push_back(tokens);
    params.push_back(queries);
    check("mhsa+mhca", [=]() {
      Rng r = pr;
      const Tensor mixed = nn::add(tokens, nn::mhsa(tokens, self_segs, self_attn, 2));
      return probe(nn::mhca(queries, mixed, cross_segs, cross_attn, 2), r);
    }, params);
  }
  {
    const Tensor logits = param(rng, 3, 25, 2.0);
    const std::vector<int> target{0, 12, 24};
    check("loss_discrete", [=]() { return loss_discrete(logits, target); }, {logits});
    const Tensor pred = param(rng, 3, 6);
    const Matrix tgt = random_matrix(rng, 3, 6);
    check("loss_continuous", [=]() { return loss_continuous(pred, tgt); }, {pred});
    const Tensor path_logits = param(rng, 3, 9, 2.0);
    const Tensor chunks = param(rng, 3, 9 * 4);
    const Matrix target_chunk = random_matrix(rng, 3, 4);
    const std::vector<int> idx{0, 4, 8};
    check("loss_hybrid", [=]() { return loss_hybrid(path_logits, chunks, target_chunk, idx, 1.3); },
          {path_logits, chunks});
  }

  for (HeadKind head : {HeadKind::hybrid, HeadKind::continuous, HeadKind::discrete25}) {
    PolicyConfig cfg;
    cfg.H = head == HeadKind::discrete25 ? 1 : 2;
    cfg.d_pt = 4;
    cfg.d_ha = 8;
    cfg.gru_hidden = 6;
    cfg.attn_heads = 2;
    cfg.pt_hidden = 8;
    cfg.head_hidden = 8;
    cfg.head_kind = head;
    auto net = std::make_shared<PolicyNet>(cfg);
    Rng init(derive_seed({seed, 5, static_cast<std::uint64_t>(head)}));
    net->params().initialize(init);
    for (auto& e : net->params().entries()) {
      e.tensor.mutable_value() += random_matrix(rng, e.tensor.rows(), e.tensor.cols(), 0.2);
    }
    auto batch = std::make_shared<std::vector<Transition>>(random_batch(rng, cfg, 3));
    check("policy_end_to_end_" + to_string(head), [net, batch]() {
      std::vector<const Transition*> ptrs;
      for (const auto& t : *batch) ptrs.push_back(&t);
      return batch_loss(*net, ptrs, 1.0);
    }, store_params(net->params()));
  }
  return results;
}

}  // namespace socnav
