#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "socnav/ablation.hpp"
#include "socnav/dataset_io.hpp"
#include "socnav/evaluate.hpp"
#include "socnav/gradcheck.hpp"
#include "socnav/render.hpp"
#include "socnav/trainer.hpp"

namespace {

// Global seed override shared by every subcommand that draws randomness.
std::optional<std::uint64_t> seed_override() {
  const char* env = std::getenv("SOCNAV_SEED");
  if (!env || !*env) return std::nullopt;
  return std::stoull(env);
}

void print_metrics(const socnav::Metrics& m) {
  std::printf("episodes %d\nSR %.4f\nCPM %.4f\nNT %.3f\nnorm_reward %.4f\n", m.episodes, m.SR, m.CPM, m.NT,
              m.norm_reward);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace socnav;
  CLI::App app{"Social navigation behaviour-cloning workbench"};
  app.require_subcommand(1);

  auto* suite_cmd = app.add_subcommand("suite", "Print the 27 evaluation scenarios as JSON lines");

  auto* collect_cmd = app.add_subcommand("collect", "Collect expert demonstrations");
  std::int64_t steps = 100000;
  std::uint64_t collect_seed = 0;
  bool ccw_only = false;
  int collect_h = 3;
  std::string data_out;
  collect_cmd->add_option("--steps", steps, "Number of transitions to store")->required();
  collect_cmd->add_option("--seed", collect_seed, "Collection seed");
  collect_cmd->add_flag("--ccw-only", ccw_only, "Only counter-clockwise circle scenarios");
  collect_cmd->add_option("--H", collect_h, "Chunk length of the stored labels");
  collect_cmd->add_option("--out", data_out, "Dataset file")->required();

  auto* train_cmd = app.add_subcommand("train", "Train a policy by behaviour cloning");
  std::string config_path, data_path, train_out;
  train_cmd->add_option("--config", config_path, "Training config (JSON)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--data", data_path, "Dataset file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_out, "Output directory")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint (or the expert) on the suite");
  std::string ckpt_path, csv_path, log_dir;
  int eval_seeds = 4;
  bool eval_expert = false;
  eval_cmd->add_option("--ckpt", ckpt_path, "Checkpoint manifest");
  eval_cmd->add_flag("--expert", eval_expert, "Evaluate the scripted expert instead");
  eval_cmd->add_option("--seeds", eval_seeds, "Seeds per scenario");
  eval_cmd->add_option("--csv", csv_path, "Per-episode table");
  eval_cmd->add_option("--log-dir", log_dir, "Write one JSON-lines episode log per episode here");

  auto* ablate_cmd = app.add_subcommand("ablate", "Train and evaluate the ablation matrix");
  std::string spec_path, regimes, ablate_out = "ablation";
  ablate_cmd->add_option("--spec", spec_path, "Ablation spec (JSON)")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--regimes", regimes, "Comma-separated data regimes")->required();
  ablate_cmd->add_option("--out", ablate_out, "Output directory");

  auto* render_cmd = app.add_subcommand("render", "Render an episode log to SVG frames");
  std::string render_log, render_out;
  render_cmd->add_option("--log", render_log, "Episode log")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--out", render_out, "Frame directory")->required();

  auto* gradcheck_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient checks");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto seed = seed_override();

    if (*suite_cmd) {
      std::cout << suite_to_jsonl(build_suite());
      return 0;
    }

    if (*collect_cmd) {
      CollectOptions opts;
      opts.H = collect_h;
      opts.ccw_only = ccw_only;
      const Dataset d = collect_demos(steps, seed.value_or(collect_seed), opts);
      write_dataset(d, data_out);
      std::printf("stored %zu transitions from %d episodes\n", d.transitions.size(),
                  d.transitions.empty() ? 0 : d.transitions.back().episode_id + 1);
      return 0;
    }

    if (*train_cmd) {
      TrainConfig cfg = load_train_config(config_path);
      if (seed) cfg.seed = *seed;
      const Dataset data = read_dataset(data_path);
      std::filesystem::create_directories(train_out);
      const std::filesystem::path out_dir = train_out;
      std::ofstream(out_dir / "config.json") << to_json(cfg) << '\n';
      std::ofstream log(out_dir / "train.log.jsonl", std::ios::app);
      TrainOptions options;
      options.log = &log;
      const TrainResult result = train(cfg, data, [&](const PolicyNet& net) {
        return validation_score(net, cfg.validation_scenarios, cfg.validation_seeds);
      }, options);
      const PolicyNet net = make_policy(cfg.policy, result.best_params);
      save_policy(net, cfg, result.best_score, result.best_step, out_dir / "best.ckpt");
      std::printf("best validation score %.4f at step %lld\n", result.best_score,
                  static_cast<long long>(result.best_step));
      return 0;
    }

    if (*eval_cmd) {
      if (eval_expert == !ckpt_path.empty()) throw std::invalid_argument("give exactly one of --ckpt or --expert");
      std::optional<LoadedPolicy> loaded;
      Controller controller;
      if (eval_expert) {
        controller = expert_controller();
      } else {
        loaded.emplace(load_policy(ckpt_path));
        controller = policy_controller(loaded->net);
      }
      const Evaluation e = evaluate(controller, build_suite(), eval_seeds);
      print_metrics(e.metrics);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        write_episode_csv(e, out);
      }
      if (!log_dir.empty()) {
        std::filesystem::create_directories(log_dir);
        for (const auto& k : e.keys) {
          EpisodeLog log;
          rollout(k.spec, k.seed, controller, {}, &log);
          write_episode_log(log, std::filesystem::path(log_dir) /
                                     ("episode_" + std::to_string(k.scenario) + "_" + std::to_string(k.seed) + ".jsonl"));
        }
      }
      return 0;
    }

    if (*ablate_cmd) {
      AblationSpec spec = load_ablation_spec(spec_path);
      if (seed) spec.full.seed = *seed;
      const auto regime_list = split_list(regimes);
      const auto rows = run_ablation(spec, regime_list, ablate_out, &std::cout);
      const std::filesystem::path out_dir = ablate_out;
      {
        std::ofstream csv(out_dir / "ablation.csv");
        write_ablation_csv(rows, csv);
      }
      std::ofstream(out_dir / "regimes.svg") << regime_plot_svg(rows, regime_list);
      write_ablation_csv(rows, std::cout);
      return 0;
    }

    if (*render_cmd) {
      const std::size_t n = write_frames(read_episode_log(render_log), render_out);
      std::printf("wrote %zu frames\n", n);
      return 0;
    }

    if (*gradcheck_cmd) {
      bool ok = true;
      for (const auto& r : run_gradchecks(1e-4, seed.value_or(0))) {
        std::printf("%-32s %.3e %s\n", r.name.c_str(), r.max_rel_error, r.passed ? "ok" : "FAIL");
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
