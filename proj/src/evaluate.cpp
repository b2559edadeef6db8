#include "socnav/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "socnav/trainer.hpp"

namespace socnav {

using nlohmann::json;

namespace {

constexpr std::uint64_t kValidationSeedBase = 1000;

std::string env_config_key(const EnvConfig& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g",
                c.dt, c.t_max, c.robot_radius, c.goal_tolerance, c.spawn_ring_radius, c.sensing_radius,
                c.limits.v_min, c.limits.v_max, c.limits.w_max, c.crowd.tau, c.crowd.dt, c.crowd.regular_margin,
                c.crowd.aggressive_margin, c.crowd.human_radius, c.crowd.human_max_speed, c.crowd.goal_tolerance);
  return buf;
}

json vec_json(Vec2 p) { return json::array({p.x, p.y}); }
Vec2 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
json pose_json(const Pose2& p) { return json::array({p.x, p.y, p.theta}); }
Pose2 pose_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

std::vector<Vec2> human_positions(const EnvState& env) {
  std::vector<Vec2> out;
  out.reserve(env.humans.size());
  for (const auto& h : env.humans) out.push_back(h.position);
  return out;
}

}  // namespace

Controller expert_controller(const ExpertConfig& cfg) {
  return [cfg](const EnvState& env) {
    const Action a = expert_action(env, cfg);
    return Decision{a, {a}};
  };
}

Controller policy_controller(const PolicyNet& net) {
  return [&net](const EnvState& env) {
    const PolicyOutput out = net.infer(build_state(env));
    auto plan = selected_plan(out, net.config());
    const Action a = env.config.limits.clamp(plan.front());
    return Decision{a, std::move(plan)};
  };
}

EpisodeResult rollout(const ScenarioSpec& spec, std::uint64_t seed, const Controller& controller,
                      const EnvConfig& env_config, EpisodeLog* log) {
  EnvState env = reset(spec, seed, env_config);
  if (log) {
    *log = EpisodeLog{};
    log->spec = spec;
    log->seed = seed;
    log->start = env.robot;
    log->start_humans = human_positions(env);
    for (const auto& h : env.humans) {
      if (h.is_static()) log->static_humans.push_back(h.position);
    }
  }
  while (!env.done) {
    Decision d = controller(env);
    const StepResult r = step(env, d.action);
    if (log) {
      StepLog s;
      s.t = env.t;
      s.robot = env.robot;
      s.action = d.action;
      s.plan = std::move(d.plan);
      s.humans = human_positions(env);
      s.collision = r.events.collision_new;
      s.reward = r.reward;
      log->steps.push_back(std::move(s));
    }
  }
  const EpisodeResult result = episode_result(env);
  if (log) log->result = result;
  return result;
}

void write_episode_log(const EpisodeLog& log, std::ostream& out) {
  json header{{"path_kind", to_string(log.spec.path_kind)},
              {"n_static", log.spec.n_static},
              {"n_dynamic", log.spec.n_dynamic},
              {"scenario_seed", log.spec.seed},
              {"seed", log.seed},
              {"start", pose_json(log.start)}};
  header["humans"] = json::array();
  for (Vec2 p : log.start_humans) header["humans"].push_back(vec_json(p));
  header["static_humans"] = json::array();
  for (Vec2 p : log.static_humans) header["static_humans"].push_back(vec_json(p));
  out << header.dump() << '\n';
  for (const auto& s : log.steps) {
    json j{{"t", s.t}, {"robot", pose_json(s.robot)}, {"action", {s.action.v, s.action.w}},
           {"collision", s.collision}, {"reward", s.reward}};
    j["plan"] = json::array();
    for (const auto& a : s.plan) j["plan"].push_back({a.v, a.w});
    j["humans"] = json::array();
    for (Vec2 p : s.humans) j["humans"].push_back(vec_json(p));
    out << j.dump() << '\n';
  }
  const auto& r = log.result;
  out << json{{"result",
               {{"success", r.success}, {"collisions", r.collisions}, {"nav_time", r.nav_time},
                {"distance", r.distance}, {"reward_sum", r.reward_sum}}}}
             .dump()
      << '\n';
}

void write_episode_log(const EpisodeLog& log, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_episode_log(log, out);
}

EpisodeLog read_episode_log(std::istream& in) {
  EpisodeLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_result = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (line_no == 1) {
        log.spec.path_kind = path_kind_from_string(j.at("path_kind").get<std::string>());
        log.spec.n_static = j.at("n_static").get<int>();
        log.spec.n_dynamic = j.at("n_dynamic").get<int>();
        log.spec.seed = j.at("scenario_seed").get<std::uint64_t>();
        log.seed = j.at("seed").get<std::uint64_t>();
        log.start = pose_from(j.at("start"));
        for (const auto& p : j.at("humans")) log.start_humans.push_back(vec_from(p));
        for (const auto& p : j.at("static_humans")) log.static_humans.push_back(vec_from(p));
      } else if (j.contains("result")) {
        const auto& r = j.at("result");
        log.result.success = r.at("success").get<bool>();
        log.result.collisions = r.at("collisions").get<int>();
        log.result.nav_time = r.at("nav_time").get<double>();
        log.result.distance = r.at("distance").get<double>();
        log.result.reward_sum = r.at("reward_sum").get<double>();
        have_result = true;
      } else {
        StepLog s;
        s.t = j.at("t").get<double>();
        s.robot = pose_from(j.at("robot"));
        s.action = {j.at("action").at(0).get<double>(), j.at("action").at(1).get<double>()};
        for (const auto& a : j.at("plan")) s.plan.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
        for (const auto& p : j.at("humans")) s.humans.push_back(vec_from(p));
        s.collision = j.at("collision").get<bool>();
        s.reward = j.at("reward").get<double>();
        log.steps.push_back(std::move(s));
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error("episode log line " + std::to_string(line_no) + ": " + e.what());
  }
  if (line_no == 0) throw std::runtime_error("episode log is empty");
  if (!have_result) throw std::runtime_error("episode log has no result line");
  return log;
}

EpisodeLog read_episode_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_episode_log(in);
}

double collisions_per_meter(const EpisodeResult& r) { return r.collisions / std::max(r.distance, 1.0); }

Metrics compute_metrics(const std::vector<EpisodeResult>& episodes, const std::vector<EpisodeResult>& reference) {
  if (episodes.empty()) throw std::invalid_argument("no episodes to score");
  if (reference.size() != episodes.size()) throw std::invalid_argument("reference episodes do not match");
  Metrics m;
  m.episodes = static_cast<int>(episodes.size());
  double reward = 0.0;
  double expert_reward = 0.0;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto& e = episodes[i];
    m.SR += e.success ? 1.0 : 0.0;
    m.CPM += collisions_per_meter(e);
    m.NT += e.nav_time;
    reward += e.reward_sum;
    expert_reward += reference[i].reward_sum;
  }
  const double n = static_cast<double>(episodes.size());
  m.SR /= n;
  m.CPM /= n;
  m.NT /= n;
  m.norm_reward = (reward / n) / (expert_reward / n);
  return m;
}

std::vector<EpisodeKey> evaluation_episodes(const std::vector<ScenarioSpec>& suite, int seeds_per_scenario) {
  std::vector<EpisodeKey> keys;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    for (int s = 0; s < seeds_per_scenario; ++s) keys.push_back({i, suite[i], static_cast<std::uint64_t>(s)});
  }
  return keys;
}

std::vector<EpisodeResult> run_episodes(const std::vector<EpisodeKey>& keys, const Controller& controller,
                                        const EnvConfig& env_config) {
  std::vector<EpisodeResult> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(rollout(k.spec, k.seed, controller, env_config));
  return out;
}

std::vector<EpisodeResult> expert_reference(const std::vector<EpisodeKey>& keys, const EnvConfig& env_config) {
  using Key = std::tuple<std::string, int, int, int, std::uint64_t, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, EpisodeResult> cache;
  const std::string env_key = env_config_key(env_config);
  const Controller expert = expert_controller();
  std::vector<EpisodeResult> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    const Key key{env_key, static_cast<int>(k.spec.path_kind), k.spec.n_static, k.spec.n_dynamic, k.spec.seed, k.seed};
    {
      std::lock_guard lock(mutex);
      if (auto it = cache.find(key); it != cache.end()) {
        out.push_back(it->second);
        continue;
      }
    }
    const EpisodeResult r = rollout(k.spec, k.seed, expert, env_config);
    std::lock_guard lock(mutex);
    cache.emplace(key, r);
    out.push_back(r);
  }
  return out;
}

Evaluation evaluate(const Controller& controller, const std::vector<ScenarioSpec>& suite, int seeds_per_scenario,
                    const EnvConfig& env_config) {
  Evaluation e;
  e.keys = evaluation_episodes(suite, seeds_per_scenario);
  e.episodes = run_episodes(e.keys, controller, env_config);
  e.reference = expert_reference(e.keys, env_config);
  e.metrics = compute_metrics(e.episodes, e.reference);
  return e;
}

void write_episode_csv(const Evaluation& e, std::ostream& out) {
  out << "scenario,path_kind,n_static,n_dynamic,seed,success,collisions,nav_time,distance,reward,expert_reward\n";
  for (std::size_t i = 0; i < e.keys.size(); ++i) {
    const auto& k = e.keys[i];
    const auto& r = e.episodes[i];
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f,%.6f,%.6f", r.success ? 1 : 0, r.collisions, r.nav_time,
                  r.distance, r.reward_sum, e.reference[i].reward_sum);
    out << k.scenario << ',' << to_string(k.spec.path_kind) << ',' << k.spec.n_static << ',' << k.spec.n_dynamic
        << ',' << k.seed << ',' << buf << '\n';
  }
}

std::vector<ScenarioSpec> suite_subset(const std::vector<ScenarioSpec>& suite, PathKind kind) {
  std::vector<ScenarioSpec> out;
  std::copy_if(suite.begin(), suite.end(), std::back_inserter(out),
               [kind](const ScenarioSpec& s) { return s.path_kind == kind; });
  return out;
}

Dataset collect_demos(std::int64_t n_env_steps, std::uint64_t seed, const CollectOptions& options) {
  if (options.H < 1) throw std::invalid_argument("H must be >= 1");
  const auto suite = build_suite();
  const auto candidates = options.ccw_only ? suite_subset(suite, PathKind::circle_ccw_8m_diam) : suite;
  Rng rng(derive_seed({seed, 0xc011ec7}));

  Dataset d;
  d.header.H = options.H;
  d.header.v_max = options.env.limits.v_max;
  d.header.w_max = options.env.limits.w_max;
  d.header.seed = seed;
  d.header.config_hash =
      fnv1a_hex(env_config_key(options.env) + (options.ccw_only ? " ccw" : " all") + " H" + std::to_string(options.H));

  const std::size_t H = static_cast<std::size_t>(options.H);
  int episode_id = 0;
  int failures_in_row = 0;
  std::vector<ModelState> states;
  std::vector<Action> actions;
  std::vector<double> times;
  while (static_cast<std::int64_t>(d.transitions.size()) < n_env_steps) {
    const ScenarioSpec spec = candidates[rng.below(candidates.size())];
    const std::uint64_t episode_seed = rng.engine()();
    EnvState env = reset(spec, episode_seed, options.env);
    states.clear();
    actions.clear();
    times.clear();
    while (!env.done) {
      states.push_back(build_state(env));
      times.push_back(env.t);
      const Action a = expert_action(env, options.expert);
      actions.push_back(a);
      step(env, a);
    }
    if (env.collisions > 0) {
      if (++failures_in_row > 1000) throw std::runtime_error("expert keeps colliding; no usable demonstrations");
      continue;
    }
    failures_in_row = 0;
    for (std::size_t t = 0; t + H <= actions.size(); ++t) {
      Transition tr;
      tr.state = states[t];
      for (std::size_t k = 0; k < H; ++k) {
        tr.chunk.push_back(actions[t + k].v);
        tr.chunk.push_back(actions[t + k].w);
      }
      tr.episode_id = episode_id;
      tr.t = times[t];
      quantize(tr);
      tr.path_index = omega_bins(tr.chunk, d.header.w_max).path_index;
      d.transitions.push_back(std::move(tr));
    }
    ++episode_id;
  }
  d.header.env_steps = static_cast<std::int64_t>(d.transitions.size());
  return d;
}

double validation_score(const PolicyNet& net, const std::vector<int>& scenarios, int seeds,
                        const EnvConfig& env_config) {
  const auto suite = build_suite();
  const Controller controller = policy_controller(net);
  double total = 0.0;
  int count = 0;
  for (int index : scenarios) {
    const auto& spec = suite.at(static_cast<std::size_t>(index));
    for (int s = 0; s < seeds; ++s) {
      total += rollout(spec, kValidationSeedBase + static_cast<std::uint64_t>(s), controller, env_config).reward_sum;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("validation needs at least one episode");
  return total / count;
}

}  // namespace socnav
