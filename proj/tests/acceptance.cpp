// Acceptance checks. Prints one "criterion N: PASS|FAIL" line per selected
// criterion and exits non-zero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lp_oracle.hpp"
#include "socnav/ablation.hpp"
#include "socnav/dataset_io.hpp"
#include "socnav/evaluate.hpp"
#include "socnav/gradcheck.hpp"
#include "socnav/losses.hpp"
#include "socnav/orca.hpp"
#include "socnav/params.hpp"
#include "socnav/policy.hpp"
#include "socnav/trainer.hpp"

using namespace socnav;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path g_work;

void note(const std::string& s) {
  std::fprintf(stderr, "  %s\n", s.c_str());
  std::fflush(stderr);
}

// 1 ---------------------------------------------------------------------------

Outcome gradient_integrity() {
  const auto results = run_gradchecks(1e-4, 0);
  double worst = 0.0;
  std::string failed;
  for (const auto& r : results) {
    worst = std::max(worst, r.max_rel_error);
    if (!r.passed) failed += " " + r.name;
  }
  return {failed.empty() && !results.empty(),
          fmt("%zu checks, worst relative error %.2e%s", results.size(), worst,
              failed.empty() ? "" : (" failed:" + failed).c_str())};
}

// 2 ---------------------------------------------------------------------------

Outcome lp_oracle() {
  Rng rng(20241);
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing_support::random_feasible_lp(rng);
    const Vec2 got = solve_velocity_lp(inst.lines, inst.pref, inst.max_speed);
    const auto want = testing_support::polar_lp(inst.lines, inst.pref, inst.max_speed, 40000);
    if (!want) {
      ++bad;
      continue;
    }
    const double err = norm(got - *want);
    worst = std::max(worst, err);
    if (err >= 2e-3) ++bad;
  }
  return {bad == 0, fmt("1000 instances, max deviation from polar search %.2e m/s, %d over tolerance", worst, bad)};
}

// 3 ---------------------------------------------------------------------------

Outcome orca_safety() {
  std::vector<OrcaAgent> agents;
  for (int i = 0; i < 8; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 8;
    OrcaAgent ag;
    ag.position = {6 * std::cos(a), 6 * std::sin(a)};
    ag.goal = -ag.position;
    agents.push_back(ag);
  }
  OrcaAgent far;
  far.position = {1000, 1000};
  far.goal = far.position;
  far.profile = Profile::static_;
  int collisions = 0;
  bool arrived = false;
  int steps = 0;
  for (; steps < 400 && !arrived; ++steps) {
    crowd_step(agents, far, CrowdParams{}, nullptr);
    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (std::size_t j = i + 1; j < agents.size(); ++j) {
        if (norm(agents[i].position - agents[j].position) < agents[i].radius + agents[j].radius) ++collisions;
      }
    }
    arrived = std::all_of(agents.begin(), agents.end(),
                          [](const OrcaAgent& a) { return norm(a.goal - a.position) < 0.3; });
  }

  const Evaluation e = evaluate(expert_controller(), build_suite(), 4);
  int expert_collisions = 0;
  for (const auto& r : e.episodes) expert_collisions += r.collisions;
  const bool pass = arrived && collisions == 0 && e.episodes.size() == 108 && expert_collisions == 0;
  return {pass, fmt("circle: %s after %d steps, %d overlaps; expert gate: %zu episodes, %d collisions, SR %.3f",
                    arrived ? "all arrived" : "not all arrived", steps, collisions, e.episodes.size(),
                    expert_collisions, e.metrics.SR)};
}

// 4 ---------------------------------------------------------------------------

Outcome structural() {
  bool pass = true;
  std::string dims;
  for (int H = 1; H <= 4; ++H) {
    PolicyConfig c;
    c.H = H;
    const int want = static_cast<int>(std::lround(std::pow(3, H))) * (2 * H + 1);
    pass = pass && c.output_dim() == want && hybrid_output_dim(H) == want;
    dims += fmt("%s%d", H == 1 ? "" : "/", c.output_dim());
  }

  const PolicyConfig cfg;
  PolicyNet net(cfg);
  Rng rng(4);
  net.params().initialize(rng);
  double worst_sum = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PolicyOutput out = net.infer(random_model_state(rng, i % 6));
    const double s = std::accumulate(out.path_probs.begin(), out.path_probs.end(), 0.0);
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  pass = pass && worst_sum <= 1e-6;

  nn::Matrix raw(10000, cfg.output_dim());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double mag = rng.below(4) == 0 ? 50.0 : 3.0;
    raw.data()[i] = rng.uniform(-mag, mag);
  }
  const nn::Matrix chunks = net.squash(nn::Tensor::constant(raw)).chunks.value();
  const double w_max = cfg.limits.w_max;
  const double width = 2.0 * w_max / 3.0;
  long outside = 0;
  for (Eigen::Index b = 0; b < chunks.rows(); ++b) {
    for (int j = 0; j < path_count(cfg.H); ++j) {
      const auto digits = path_digits(j, cfg.H);
      for (int t = 0; t < cfg.H; ++t) {
        const double w = chunks(b, j * 2 * cfg.H + 2 * t + 1);
        const double lo = -w_max + width * digits[static_cast<std::size_t>(t)];
        if (!(w > lo && w < lo + width)) ++outside;
      }
    }
  }
  pass = pass && outside == 0;
  return {pass, fmt("dims H=1..4 %s; max |sum p - 1| %.1e; %ld of 10000x81 squashed w outside their open bin",
                    dims.c_str(), worst_sum, outside)};
}

// 5 ---------------------------------------------------------------------------

Outcome loss_identities() {
  Rng rng(5);
  const int P = 27, H = 3;
  nn::Matrix target(1, 2 * H);
  for (int k = 0; k < H; ++k) {
    target(0, 2 * k) = rng.uniform(0.0, 1.0);
    target(0, 2 * k + 1) = rng.uniform(-1.0, 1.0);
  }
  const int idx = omega_bins(std::vector<double>(target.data(), target.data() + target.size()), 1.0).path_index;

  nn::Matrix logits = nn::Matrix::Zero(1, P);
  logits(0, idx) = 1000.0;
  nn::Matrix chunks(1, P * 2 * H);
  for (int j = 0; j < P; ++j) {
    for (int c = 0; c < 2 * H; ++c) chunks(0, j * 2 * H + c) = j == idx ? target(0, c) : rng.uniform(-1.0, 1.0);
  }
  const double exact =
      loss_hybrid(nn::Tensor::constant(logits), nn::Tensor::constant(chunks), target, {idx}, 1.0).item();

  nn::Matrix same(1, P * 2 * H);
  for (int j = 0; j < P; ++j) same.block(0, j * 2 * H, 1, 2 * H) = target;
  const double uniform = loss_hybrid(nn::Tensor::constant(nn::Matrix::Zero(1, P)), nn::Tensor::constant(same),
                                     target, {idx}, 1.0)
                             .item();

  Dataset d;
  for (int i = 0; i < 300; ++i) {
    Transition t;
    t.state = random_model_state(rng, static_cast<int>(rng.below(5)));
    for (int k = 0; k < H; ++k) {
      t.chunk.push_back(rng.uniform(0.0, 1.0));
      t.chunk.push_back(rng.uniform(-1.0, 1.0));
    }
    t.path_index = omega_bins(t.chunk, 1.0).path_index;
    t.episode_id = i / 30;
    t.t = 0.25 * (i % 30);
    d.transitions.push_back(t);
  }
  int not_involutive = 0;
  for (const auto& t : d.transitions) {
    if (!(flip_augment(flip_augment(t, 1.0), 1.0) == t)) ++not_involutive;
  }
  const Dataset doubled = flip_augmented(d);
  const bool pass = exact == 0.0 && std::abs(uniform - std::log(27.0)) <= 1e-9 && not_involutive == 0 &&
                    doubled.transitions.size() == 2 * d.transitions.size();
  return {pass, fmt("exact-target loss %.3g; uniform loss - ln 27 = %.2e; %d non-involutive flips; %zu -> %zu samples",
                    exact, uniform - std::log(27.0), not_involutive, d.transitions.size(),
                    doubled.transitions.size())};
}

// 6 ---------------------------------------------------------------------------

Outcome optimizer_decoupling() {
  auto run = [](nn::OptimizerKind kind) {
    nn::ParamStore s;
    s.add("w", 8, 8, nn::Init::xavier);
    s.add("b", 1, 8, nn::Init::xavier);
    Rng rng(6);
    s.initialize(rng);
    const nn::OptimizerConfig cfg{kind, 1e-4, 0.9, 0.999, 1e-8, 5e-3};
    double dev = 0.0;
    for (int step = 0; step < 10; ++step) {
      const auto before = s.snapshot();
      s.zero_grad();
      nn::optimizer_step(s, cfg);
      const auto after = s.snapshot();
      for (std::size_t i = 0; i < before.size(); ++i) {
        dev = std::max(dev, (after[i] - before[i] * (1.0 - cfg.lr * cfg.weight_decay)).cwiseAbs().maxCoeff());
      }
    }
    return dev;
  };
  const double adamw = run(nn::OptimizerKind::adamw);
  const double adam = run(nn::OptimizerKind::adam);
  return {adamw <= 1e-12 && adam > 1e-9,
          fmt("max deviation from (1 - lr wd) per step: adamw %.2e, adam %.2e", adamw, adam)};
}

// 7 ---------------------------------------------------------------------------

Outcome perturbation_schedule() {
  const TrainConfig unscaled;
  int wrong = 0, fired = 0;
  for (std::int64_t s = 0; s <= unscaled.scaled_total(); s += 1000) {
    const auto m = perturb_schedule(s, unscaled);
    const bool boundary = s > 0 && s % 50'000 == 0;
    if (m.has_value() != boundary) {
      ++wrong;
      continue;
    }
    if (!m) continue;
    ++fired;
    const double want = s <= 750'000 ? 0.3 : 0.3 * std::pow(0.9, static_cast<double>((s - 750'000) / 50'000));
    if (std::abs(*m - want) > 1e-15) ++wrong;
  }
  for (std::int64_t s : {1, 49'999, 50'001, 799'999}) {
    if (perturb_schedule(s, unscaled)) ++wrong;
  }
  int scaled_wrong = 0;
  for (double scale : {0.1, 0.05}) {
    TrainConfig c;
    c.scale = scale;
    for (std::int64_t s = 0; s <= c.scaled_total(); ++s) {
      const auto m = perturb_schedule(s, c);
      const double frac = static_cast<double>(s) / static_cast<double>(c.scaled_total());
      const std::int64_t full_step = std::llround(frac * static_cast<double>(unscaled.scaled_total()));
      const bool full_boundary = std::abs(frac * unscaled.scaled_total() - full_step) < 1e-6 &&
                                 perturb_schedule(full_step, unscaled).has_value();
      if (m.has_value() != full_boundary) {
        ++scaled_wrong;
      } else if (m && *m != *perturb_schedule(full_step, unscaled)) {
        ++scaled_wrong;
      }
    }
  }
  return {wrong == 0 && scaled_wrong == 0 && fired == 40,
          fmt("%d boundaries at scale 1, %d mismatches; %d mismatches at scales 0.1 and 0.05", fired, wrong,
              scaled_wrong)};
}

// 8-10 ------------------------------------------------------------------------

TrainConfig desk_full() {
  TrainConfig c = full_config();
  c.batch_size = 32;
  c.scale = 0.1;
  c.policy.d_ha = 64;
  c.policy.gru_hidden = 32;
  c.lr = 1e-3;
  c.log_every = 1000;
  return c;
}

// Trained on CCW circles only, so validation stays on CCW circles too.
TrainConfig ccw_validated(TrainConfig c) {
  const auto suite = build_suite();
  c.validation_scenarios.clear();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (suite[i].path_kind == PathKind::circle_ccw_8m_diam) c.validation_scenarios.push_back(static_cast<int>(i));
  }
  return c;
}

TrainConfig desk_base() { return base_config(desk_full()); }

TrainConfig no_perturb(TrainConfig c) {
  c.perturb = false;
  return c;
}

std::map<std::string, std::shared_ptr<Dataset>> g_data;

const Dataset& dataset(const std::string& name) {
  auto& slot = g_data[name];
  if (!slot) {
    CollectOptions opts;
    std::int64_t steps = 100'000;
    if (name == "d50k") steps = 50'000;
    if (name == "ccw100k") opts.ccw_only = true;
    const auto t0 = std::chrono::steady_clock::now();
    slot = std::make_shared<Dataset>(collect_demos(steps, 0, opts));
    note(fmt("collected %s: %zu transitions in %.0f s", name.c_str(), slot->transitions.size(),
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
    write_dataset(*slot, g_work / (name + ".jsonl"));
  }
  return *slot;
}

struct Trained {
  TrainConfig cfg;
  std::unique_ptr<PolicyNet> net;
};

std::map<std::string, Trained> g_models;

const PolicyNet& model(const std::string& name, const TrainConfig& cfg, const std::string& data) {
  auto it = g_models.find(name);
  if (it != g_models.end()) return *it->second.net;
  const Dataset& d = dataset(data);
  const fs::path dir = g_work / name;
  fs::create_directories(dir);
  std::ofstream log(dir / "train.log.jsonl");
  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult r = train(cfg, d, [&](const PolicyNet& net) {
    return validation_score(net, cfg.validation_scenarios, cfg.validation_seeds);
  }, {&log});
  auto net = std::make_unique<PolicyNet>(make_policy(cfg.policy, r.best_params));
  save_policy(*net, cfg, r.best_score, r.best_step, dir / "best.ckpt");
  note(fmt("trained %s on %s: best step %lld score %.2f, %.0f s", name.c_str(), data.c_str(),
           static_cast<long long>(r.best_step), r.best_score,
           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
  const PolicyNet& ref = *net;
  g_models[name] = {cfg, std::move(net)};
  return ref;
}

Metrics eval_on(const PolicyNet& net, const std::vector<ScenarioSpec>& suite, const std::string& label) {
  const Evaluation e = evaluate(policy_controller(net), suite, 4);
  note(fmt("%s: episodes %d SR %.3f CPM %.4f NT %.1f norm_reward %.3f", label.c_str(), e.metrics.episodes,
           e.metrics.SR, e.metrics.CPM, e.metrics.NT, e.metrics.norm_reward));
  return e.metrics;
}

std::map<std::string, Metrics> g_full_suite;

Metrics full_suite(const std::string& name, const TrainConfig& cfg, const std::string& data) {
  auto it = g_full_suite.find(name);
  if (it != g_full_suite.end()) return it->second;
  const Metrics m = eval_on(model(name, cfg, data), build_suite(), name);
  g_full_suite[name] = m;
  return m;
}

Outcome ingredient_ordering() {
  const Metrics base = full_suite("base_100k", desk_base(), "d100k");
  const Metrics full = full_suite("full_100k", desk_full(), "d100k");
  const bool pass = full.SR - base.SR >= 0.2 && full.CPM <= base.CPM;
  return {pass, fmt("full SR %.3f CPM %.4f; base SR %.3f CPM %.4f", full.SR, full.CPM, base.SR, base.CPM)};
}

Outcome flip_generalization() {
  const auto suite = build_suite();
  const auto cw = suite_subset(suite, PathKind::circle_cw_8m_diam);
  const auto ccw = suite_subset(suite, PathKind::circle_ccw_8m_diam);
  const PolicyNet& full = model("full_ccw", ccw_validated(desk_full()), "ccw100k");
  const Metrics full_cw = eval_on(full, cw, "full_ccw on CW");
  const Metrics full_ccw = eval_on(full, ccw, "full_ccw on CCW");
  const PolicyNet& base = model("base_ccw", ccw_validated(desk_base()), "ccw100k");
  const Metrics base_cw = eval_on(base, cw, "base_ccw on CW");
  const Metrics base_ccw = eval_on(base, ccw, "base_ccw on CCW");
  const bool pass = full_cw.SR >= 0.8 * full_ccw.SR && base_ccw.SR - base_cw.SR >= 0.2;
  return {pass, fmt("full SR CW %.3f / CCW %.3f; base SR CW %.3f / CCW %.3f", full_cw.SR, full_ccw.SR, base_cw.SR,
                    base_ccw.SR)};
}

Outcome perturbation_benefit() {
  const Metrics with50 = full_suite("full_50k", desk_full(), "d50k");
  const Metrics without50 = full_suite("full_noperturb_50k", no_perturb(desk_full()), "d50k");
  const Metrics with100 = full_suite("full_100k", desk_full(), "d100k");
  const Metrics without100 = full_suite("full_noperturb_100k", no_perturb(desk_full()), "d100k");
  const bool pass = with50.norm_reward >= without50.norm_reward && with100.norm_reward >= without100.norm_reward;
  return {pass, fmt("norm_reward 50k: %.3f with vs %.3f without; 100k: %.3f with vs %.3f without", with50.norm_reward,
                    without50.norm_reward, with100.norm_reward, without100.norm_reward)};
}

// 11 --------------------------------------------------------------------------

Outcome determinism() {
  const Dataset data = collect_demos(10'000, 11);
  TrainConfig cfg = desk_full();
  cfg.scale = 1.0;
  cfg.total_steps = 1000;
  cfg.perturb_period = 250;
  cfg.decay_onset = 500;
  cfg.validation_scenarios = {0, 13};
  cfg.validation_seeds = 1;
  auto run = [&] {
    const TrainResult r = train(cfg, data, [&](const PolicyNet& net) {
      return validation_score(net, cfg.validation_scenarios, cfg.validation_seeds);
    });
    const PolicyNet net = make_policy(cfg.policy, r.best_params);
    const Evaluation e = evaluate(policy_controller(net), build_suite(), 4);
    return std::make_pair(r.losses, e);
  };
  const auto [la, ea] = run();
  const auto [lb, eb] = run();
  bool same_losses = la.size() >= 1000 && la.size() == lb.size();
  for (std::size_t i = 0; same_losses && i < 1000; ++i) {
    same_losses = std::memcmp(&la[i], &lb[i], sizeof(double)) == 0;
  }
  bool same_episodes = ea.episodes.size() == eb.episodes.size();
  for (std::size_t i = 0; same_episodes && i < ea.episodes.size(); ++i) {
    const auto& x = ea.episodes[i];
    const auto& y = eb.episodes[i];
    same_episodes = x.success == y.success && x.collisions == y.collisions && x.nav_time == y.nav_time &&
                    x.distance == y.distance && x.reward_sum == y.reward_sum;
  }
  const bool pass = same_losses && same_episodes && ea.metrics == eb.metrics;
  return {pass, fmt("%zu losses %s; metrics %s (SR %.3f norm_reward %.4f)", la.size(),
                    same_losses ? "bitwise identical" : "differ", ea.metrics == eb.metrics ? "identical" : "differ",
                    ea.metrics.SR, ea.metrics.norm_reward)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::string work = "acceptance_work";
  app.add_option("--criteria", selected, "Criteria to run")->delimiter(',');
  app.add_option("--work", work, "Directory for datasets, checkpoints and logs");
  CLI11_PARSE(app, argc, argv);
  g_work = work;
  fs::create_directories(g_work);

  const std::map<int, std::function<Outcome()>> checks{
      {1, gradient_integrity},  {2, lp_oracle},           {3, orca_safety},
      {4, structural},          {5, loss_identities},     {6, optimizer_decoupling},
      {7, perturbation_schedule}, {8, ingredient_ordering}, {9, flip_generalization},
      {10, perturbation_benefit}, {11, determinism},
  };

  nlohmann::json report = nlohmann::json::object();
  int failures = 0;
  for (int id : selected) {
    const auto it = checks.find(id);
    if (it == checks.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    report[std::to_string(id)] = {{"pass", o.pass}, {"detail", o.detail}, {"seconds", secs}};
    if (!o.pass) ++failures;
  }
  std::ofstream(g_work / "report.json") << report.dump(2) << "\n";
  return failures == 0 ? 0 : 1;
}
