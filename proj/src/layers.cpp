#include "socnav/layers.hpp"

namespace socnav::nn {

Linear Linear::create(ParamStore& store, const std::string& name, Eigen::Index in, Eigen::Index out) {
  return {store.add(name + ".W", in, out, Init::xavier), store.add(name + ".b", 1, out, Init::zeros)};
}

Tensor Linear::operator()(const Tensor& x) const { return add_row(matmul(x, weight), bias); }

Mlp Mlp::create(ParamStore& store, const std::string& name, const std::vector<Eigen::Index>& widths) {
  Mlp m;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    m.layers.push_back(Linear::create(store, name + ".l" + std::to_string(i), widths[i], widths[i + 1]));
  }
  return m;
}

Tensor Mlp::operator()(const Tensor& x) const {
  Tensor h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = layers[i](h);
    if (i + 1 < layers.size()) h = silu(h);
  }
  return h;
}

GruParams GruParams::create(ParamStore& store, const std::string& name, Eigen::Index in,
                            Eigen::Index hidden) {
  return {store.add(name + ".Wx", in, 3 * hidden, Init::xavier),
          store.add(name + ".Wh", hidden, 3 * hidden, Init::xavier),
          store.add(name + ".bx", 1, 3 * hidden, Init::zeros),
          store.add(name + ".bh", 1, 3 * hidden, Init::zeros)};
}

Tensor gru_cell(const Tensor& x, const Tensor& h, const GruParams& p) {
  const Eigen::Index hid = p.hidden();
  const Tensor gx = add_row(matmul(x, p.w_input), p.b_input);
  const Tensor gh = add_row(matmul(h, p.w_hidden), p.b_hidden);
  const Tensor r = sigmoid(add(slice_cols(gx, 0, hid), slice_cols(gh, 0, hid)));
  const Tensor z = sigmoid(add(slice_cols(gx, hid, hid), slice_cols(gh, hid, hid)));
  const Tensor cand = tanh(add(slice_cols(gx, 2 * hid, hid), mul(r, slice_cols(gh, 2 * hid, hid))));
  return add(h, mul(z, sub(cand, h)));
}

AttentionParams AttentionParams::create(ParamStore& store, const std::string& name, Eigen::Index dim) {
  return {store.add(name + ".Wq", dim, dim, Init::xavier), store.add(name + ".Wk", dim, dim, Init::xavier),
          store.add(name + ".Wv", dim, dim, Init::xavier), store.add(name + ".Wo", dim, dim, Init::xavier)};
}

Tensor mhsa(const Tensor& tokens, const std::vector<AttentionSegment>& segments,
            const AttentionParams& p, int heads) {
  return mhca(tokens, tokens, segments, p, heads);
}

Tensor mhca(const Tensor& queries, const Tensor& keys, const std::vector<AttentionSegment>& segments,
            const AttentionParams& p, int heads) {
  const Tensor q = matmul(queries, p.w_query);
  const Tensor k = matmul(keys, p.w_key);
  const Tensor v = matmul(keys, p.w_value);
  return matmul(attention(q, k, v, segments, heads), p.w_out);
}

}  // namespace socnav::nn
