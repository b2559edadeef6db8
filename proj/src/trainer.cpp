#include "socnav/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "socnav/losses.hpp"

namespace socnav {

using nlohmann::json;
using nn::Matrix;
using nn::Tensor;

std::int64_t TrainConfig::scaled_total() const { return std::llround(static_cast<double>(total_steps) * scale); }
std::int64_t TrainConfig::scaled_period() const { return std::llround(static_cast<double>(perturb_period) * scale); }
std::int64_t TrainConfig::scaled_onset() const { return std::llround(static_cast<double>(decay_onset) * scale); }

void TrainConfig::validate() const {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (weight_decay < 0.0) throw std::invalid_argument("weight_decay must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (total_steps < 0) throw std::invalid_argument("total_steps must be >= 0");
  if (perturb_period < 1 || decay_onset < 0) throw std::invalid_argument("bad perturbation period or onset");
  if (decay_onset % perturb_period != 0) throw std::invalid_argument("perturb_period must divide decay_onset");
  if (scaled_period() < 1) throw std::invalid_argument("scaled perturb_period is below one step");
  if (scaled_onset() % scaled_period() != 0) throw std::invalid_argument("scaled perturb_period must divide scaled decay_onset");
  if (perturb_mix < 0.0 || perturb_mix > 1.0) throw std::invalid_argument("perturb_mix must be in [0, 1]");
  if (perturb_decay < 0.0 || perturb_decay > 1.0) throw std::invalid_argument("perturb_decay must be in [0, 1]");
  if (w_d < 0.0) throw std::invalid_argument("w_d must be >= 0");
  if (validation_seeds < 1) throw std::invalid_argument("validation_seeds must be >= 1");
  if (log_every < 1) throw std::invalid_argument("log_every must be >= 1");
  policy.validate();
}

namespace {

std::string optimizer_name(nn::OptimizerKind k) { return k == nn::OptimizerKind::adam ? "adam" : "adamw"; }

nn::OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "adam") return nn::OptimizerKind::adam;
  if (s == "adamw") return nn::OptimizerKind::adamw;
  throw std::invalid_argument("unknown optimizer: " + s);
}

json config_to_object(const TrainConfig& c) {
  return json{
      {"lr", c.lr},
      {"weight_decay", c.weight_decay},
      {"optimizer", optimizer_name(c.optimizer)},
      {"batch_size", c.batch_size},
      {"total_steps", c.total_steps},
      {"perturb_period", c.perturb_period},
      {"perturb_mix", c.perturb_mix},
      {"perturb_decay", c.perturb_decay},
      {"decay_onset", c.decay_onset},
      {"w_d", c.w_d},
      {"flip_aug", c.flip_aug},
      {"perturb", c.perturb},
      {"reset_to_best", c.reset_to_best},
      {"scale", c.scale},
      {"H", c.policy.H},
      {"head_kind", to_string(c.policy.head_kind)},
      {"d_pt", c.policy.d_pt},
      {"d_ha", c.policy.d_ha},
      {"gru_hidden", c.policy.gru_hidden},
      {"attn_heads", c.policy.attn_heads},
      {"pt_hidden", c.policy.pt_hidden},
      {"head_hidden", c.policy.head_hidden},
      {"v_min", c.policy.limits.v_min},
      {"v_max", c.policy.limits.v_max},
      {"w_max", c.policy.limits.w_max},
      {"validation_scenarios", c.validation_scenarios},
      {"validation_seeds", c.validation_seeds},
      {"seed", c.seed},
      {"log_every", c.log_every},
  };
}

}  // namespace

std::string to_json(const TrainConfig& cfg) { return config_to_object(cfg).dump(); }

TrainConfig train_config_from_json(const std::string& text, const TrainConfig& base) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("train config must be a JSON object");
  TrainConfig c = base;
  const json known = config_to_object(c);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("unknown train config key: " + key);
    try {
      if (key == "lr") c.lr = value.get<double>();
      else if (key == "weight_decay") c.weight_decay = value.get<double>();
      else if (key == "optimizer") c.optimizer = optimizer_from_string(value.get<std::string>());
      else if (key == "batch_size") c.batch_size = value.get<int>();
      else if (key == "total_steps") c.total_steps = value.get<std::int64_t>();
      else if (key == "perturb_period") c.perturb_period = value.get<std::int64_t>();
      else if (key == "perturb_mix") c.perturb_mix = value.get<double>();
      else if (key == "perturb_decay") c.perturb_decay = value.get<double>();
      else if (key == "decay_onset") c.decay_onset = value.get<std::int64_t>();
      else if (key == "w_d") c.w_d = value.get<double>();
      else if (key == "flip_aug") c.flip_aug = value.get<bool>();
      else if (key == "perturb") c.perturb = value.get<bool>();
      else if (key == "reset_to_best") c.reset_to_best = value.get<bool>();
      else if (key == "scale") c.scale = value.get<double>();
      else if (key == "H") c.policy.H = value.get<int>();
      else if (key == "head_kind") c.policy.head_kind = head_kind_from_string(value.get<std::string>());
      else if (key == "d_pt") c.policy.d_pt = value.get<int>();
      else if (key == "d_ha") c.policy.d_ha = value.get<int>();
      else if (key == "gru_hidden") c.policy.gru_hidden = value.get<int>();
      else if (key == "attn_heads") c.policy.attn_heads = value.get<int>();
      else if (key == "pt_hidden") c.policy.pt_hidden = value.get<int>();
      else if (key == "head_hidden") c.policy.head_hidden = value.get<int>();
      else if (key == "v_min") c.policy.limits.v_min = value.get<double>();
      else if (key == "v_max") c.policy.limits.v_max = value.get<double>();
      else if (key == "w_max") c.policy.limits.w_max = value.get<double>();
      else if (key == "validation_scenarios") c.validation_scenarios = value.get<std::vector<int>>();
      else if (key == "validation_seeds") c.validation_seeds = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "log_every") c.log_every = value.get<int>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("train config key " + key + ": " + e.what());
    }
  }
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path, const TrainConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return train_config_from_json(ss.str(), base);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const TrainConfig& cfg) { return fnv1a_hex(to_json(cfg)); }

std::optional<double> perturb_schedule(std::int64_t step, const TrainConfig& cfg) {
  const std::int64_t period = cfg.scaled_period();
  if (step <= 0 || period <= 0 || step % period != 0) return std::nullopt;
  const std::int64_t onset = cfg.scaled_onset();
  const std::int64_t k = step > onset ? (step - onset) / period : 0;
  return cfg.perturb_mix * std::pow(cfg.perturb_decay, static_cast<double>(k));
}

void perturb_weights(nn::ParamStore& store, Rng& rng, double mix) {
  if (mix < 0.0 || mix > 1.0) throw std::invalid_argument("perturbation mix must be in [0, 1]");
  const std::vector<Matrix> fresh = store.sample_initial(rng);
  auto& entries = store.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Matrix& w = entries[i].tensor.mutable_value();
    if (mix == 1.0) {
      w = fresh[i];
    } else if (mix != 0.0) {
      w = (1.0 - mix) * w + mix * fresh[i];
    }
  }
  store.reset_moments();
}

Targets make_targets(std::span<const Transition* const> batch, const PolicyConfig& cfg) {
  const int two_h = 2 * cfg.H;
  Targets t;
  t.chunk.resize(static_cast<Eigen::Index>(batch.size()), two_h);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& chunk = batch[b]->chunk;
    if (static_cast<int>(chunk.size()) < two_h) throw std::invalid_argument("transition chunk shorter than 2H");
    std::vector<double> head(chunk.begin(), chunk.begin() + two_h);
    for (int k = 0; k < two_h; ++k) t.chunk(static_cast<Eigen::Index>(b), k) = head[static_cast<std::size_t>(k)];
    t.path_index.push_back(omega_bins(head, cfg.limits.w_max).path_index);
    t.cell.push_back(discrete_cell({head[0], head[1]}, cfg.limits));
  }
  return t;
}

Tensor batch_loss(const PolicyNet& net, std::span<const Transition* const> batch, double w_d) {
  const auto& cfg = net.config();
  std::vector<const ModelState*> states;
  states.reserve(batch.size());
  for (const auto* t : batch) states.push_back(&t->state);
  const BatchOutput out = net.forward(states);
  const Targets targets = make_targets(batch, cfg);
  switch (cfg.head_kind) {
    case HeadKind::hybrid: return loss_hybrid(out.logits, out.chunks, targets.chunk, targets.path_index, w_d);
    case HeadKind::continuous: return loss_continuous(out.chunks, targets.chunk);
    case HeadKind::discrete25: return loss_discrete(out.logits, targets.cell);
  }
  throw std::logic_error("unhandled head kind");
}

namespace {

void check_compatible(const TrainConfig& cfg, const Dataset& data) {
  if (data.transitions.empty()) throw std::invalid_argument("training dataset is empty");
  if (cfg.policy.H > data.header.H) {
    throw std::invalid_argument("config H = " + std::to_string(cfg.policy.H) + " exceeds dataset H = " +
                                std::to_string(data.header.H));
  }
  if (std::abs(data.header.w_max - cfg.policy.limits.w_max) > 1e-12 ||
      std::abs(data.header.v_max - cfg.policy.limits.v_max) > 1e-12) {
    throw std::invalid_argument("dataset action limits differ from the policy's");
  }
  for (const auto& t : data.transitions) {
    if (static_cast<int>(t.chunk.size()) != 2 * data.header.H) {
      throw std::invalid_argument("dataset transition chunk length disagrees with its header");
    }
  }
}

void log_line(std::ostream* log, const json& j) {
  if (log) *log << j.dump() << '\n';
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const Dataset& data, const Validator& validate,
                  const TrainOptions& options) {
  cfg.validate();
  check_compatible(cfg, data);

  PolicyNet net(cfg.policy);
  Rng init_rng(derive_seed({cfg.seed, 1}));
  Rng batch_rng(derive_seed({cfg.seed, 2}));
  Rng perturb_rng(derive_seed({cfg.seed, 3}));
  net.params().initialize(init_rng);

  nn::OptimizerConfig opt;
  opt.kind = cfg.optimizer;
  opt.lr = cfg.lr;
  opt.weight_decay = cfg.weight_decay;

  const std::uint64_t n_data = data.transitions.size();
  const std::uint64_t n_logical = cfg.flip_aug ? 2 * n_data : n_data;
  const std::int64_t total = cfg.scaled_total();
  const std::int64_t period = cfg.scaled_period();

  TrainResult result;
  result.losses.reserve(static_cast<std::size_t>(total));

  auto record = [&](std::int64_t step, std::optional<double> mix) {
    ValidationRecord rec;
    rec.step = step;
    rec.score = validate(net);
    if (result.validations.empty() || rec.score > result.best_score) {
      result.best_score = rec.score;
      result.best_step = step;
      result.best_params = net.params().snapshot();
      rec.new_best = true;
    }
    rec.mix_applied = mix;
    result.validations.push_back(rec);
    return rec;
  };

  {
    const auto rec = record(0, std::nullopt);
    log_line(options.log, {{"step", 0}, {"val_score", rec.score}});
  }

  std::vector<Transition> flipped;
  std::vector<const Transition*> batch(static_cast<std::size_t>(cfg.batch_size));
  for (std::int64_t step = 1; step <= total; ++step) {
    flipped.clear();
    flipped.reserve(batch.size());
    for (auto& slot : batch) {
      const std::uint64_t i = batch_rng.below(n_logical);
      if (i < n_data) {
        slot = &data.transitions[i];
      } else {
        flipped.push_back(flip_augment(data.transitions[i - n_data], cfg.policy.limits.w_max));
        slot = nullptr;
      }
    }
    std::size_t next_flip = 0;
    for (auto& slot : batch) {
      if (!slot) slot = &flipped[next_flip++];
    }

    const Tensor loss = batch_loss(net, batch, cfg.w_d);
    nn::backward(loss);
    nn::optimizer_step(net.params(), opt);
    net.params().zero_grad();
    const double value = loss.item();
    result.losses.push_back(value);

    const bool boundary = step % period == 0 || step == total;
    if (!boundary) {
      if (step % cfg.log_every == 0) log_line(options.log, {{"step", step}, {"loss", value}});
      continue;
    }

    std::optional<double> mix;
    if (cfg.perturb && step < total) mix = perturb_schedule(step, cfg);
    const auto rec = record(step, mix);
    json line{{"step", step}, {"loss", value}, {"val_score", rec.score}};
    if (mix) line["mix_applied"] = *mix;
    log_line(options.log, line);

    if (step == total) break;
    if (cfg.reset_to_best && !rec.new_best) net.params().restore(result.best_params);
    if (mix) perturb_weights(net.params(), perturb_rng, *mix);
  }
  return result;
}

PolicyNet make_policy(const PolicyConfig& cfg, const std::vector<Matrix>& params) {
  PolicyNet net(cfg);
  net.params().restore(params);
  return net;
}

void save_policy(const PolicyNet& net, const TrainConfig& cfg, double score, std::int64_t step,
                 const std::filesystem::path& path) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", score);
  nn::save_checkpoint(net.params(),
                      {{"config", to_json(cfg)}, {"score", buf}, {"step", std::to_string(step)}}, path);
}

LoadedPolicy load_policy(const std::filesystem::path& path) {
  // Read the config first so the network can be built with the right shape.
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::string line;
  std::string config_text;
  while (std::getline(in, line)) {
    if (line.rfind("meta config ", 0) == 0) config_text = line.substr(12);
  }
  if (config_text.empty()) throw std::runtime_error("checkpoint has no training config: " + path.string());
  TrainConfig cfg = train_config_from_json(config_text);
  PolicyNet net(cfg.policy);
  const auto meta = nn::load_checkpoint(net.params(), path);
  const double score = meta.count("score") ? std::stod(meta.at("score")) : 0.0;
  return {std::move(cfg), std::move(net), score};
}

}  // namespace socnav
