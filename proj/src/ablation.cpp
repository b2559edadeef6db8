#include "socnav/ablation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "socnav/dataset_io.hpp"

namespace socnav {

using nlohmann::json;

TrainConfig full_config(const TrainConfig& base) {
  TrainConfig c = base;
  c.flip_aug = true;
  c.policy.H = 3;
  c.policy.head_kind = HeadKind::hybrid;
  c.perturb = true;
  c.reset_to_best = true;
  c.policy.d_pt = 16;
  c.optimizer = nn::OptimizerKind::adamw;
  c.weight_decay = 5e-3;
  return c;
}

TrainConfig base_config(const TrainConfig& full) {
  TrainConfig c = full;
  c.flip_aug = false;
  c.policy.H = 1;
  c.policy.head_kind = HeadKind::continuous;
  c.perturb = false;
  c.reset_to_best = false;
  c.policy.d_pt = std::min(128, c.policy.d_ha);
  c.optimizer = nn::OptimizerKind::adam;
  c.weight_decay = 0.0;
  return c;
}

std::vector<AblationVariant> ablation_variants(const TrainConfig& full) {
  std::vector<AblationVariant> out;
  out.push_back({"base", base_config(full)});
  out.push_back({"full", full});
  auto minus = [&](const std::string& name, auto&& edit) {
    TrainConfig c = full;
    edit(c);
    out.push_back({name, c});
  };
  minus("no_flip", [](TrainConfig& c) { c.flip_aug = false; });
  minus("no_chunking", [](TrainConfig& c) { c.policy.H = 1; });
  minus("continuous_head", [](TrainConfig& c) { c.policy.head_kind = HeadKind::continuous; });
  minus("discrete_head", [](TrainConfig& c) {
    c.policy.head_kind = HeadKind::discrete25;
    c.policy.H = 1;
  });
  minus("no_perturb", [](TrainConfig& c) { c.perturb = false; });
  minus("no_reset", [](TrainConfig& c) { c.reset_to_best = false; });
  minus("d_pt_128", [](TrainConfig& c) { c.policy.d_pt = std::min(128, c.policy.d_ha); });
  minus("adam", [](TrainConfig& c) { c.optimizer = nn::OptimizerKind::adam; });
  minus("no_weight_decay", [](TrainConfig& c) { c.weight_decay = 0.0; });
  return out;
}

std::vector<std::string> differing_axes(const TrainConfig& a, const TrainConfig& b) {
  std::vector<std::string> axes;
  const bool discrete = a.policy.head_kind == HeadKind::discrete25 || b.policy.head_kind == HeadKind::discrete25;
  if (a.flip_aug != b.flip_aug) axes.push_back("flip_aug");
  if (!discrete && a.policy.H != b.policy.H) axes.push_back("H");
  if (a.policy.head_kind != b.policy.head_kind) axes.push_back("head_kind");
  if (a.perturb != b.perturb) axes.push_back("perturb");
  if (a.reset_to_best != b.reset_to_best) axes.push_back("reset_to_best");
  if (a.policy.d_pt != b.policy.d_pt) axes.push_back("d_pt");
  if (a.optimizer != b.optimizer) axes.push_back("optimizer");
  if (a.weight_decay != b.weight_decay) axes.push_back("weight_decay");
  return axes;
}

void check_variants(const std::vector<AblationVariant>& variants) {
  const auto find = [&](const std::string& name) -> const TrainConfig& {
    for (const auto& v : variants) {
      if (v.name == name) return v.config;
    }
    throw std::logic_error("ablation is missing the " + name + " variant");
  };
  const TrainConfig& full = find("full");
  const TrainConfig& base = find("base");
  if (differing_axes(base, full).size() != 8) throw std::logic_error("base must differ from full on every axis");
  std::set<std::string> names;
  for (const auto& v : variants) {
    if (!names.insert(v.name).second) throw std::logic_error("duplicate variant " + v.name);
    if (v.name == "base" || v.name == "full") continue;
    if (differing_axes(v.config, full).size() != 1) throw std::logic_error(v.name + " must change exactly one axis");
  }
}

AblationSpec load_ablation_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ablation spec " + path.string());
  const json j = json::parse(in);
  AblationSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "config") {
      spec.full = full_config(train_config_from_json(value.dump()));
    } else if (key == "variants") {
      spec.variants = value.get<std::vector<std::string>>();
    } else if (key == "datasets") {
      for (const auto& [regime, file] : value.items()) {
        std::filesystem::path p = file.get<std::string>();
        if (p.is_relative()) p = path.parent_path() / p;
        spec.datasets[regime] = p;
      }
    } else if (key == "eval_seeds") {
      spec.eval_seeds = value.get<int>();
    } else {
      throw std::invalid_argument("unknown ablation spec key: " + key);
    }
  }
  return spec;
}

void check_regimes(const AblationSpec& spec, const std::vector<std::string>& regimes) {
  std::vector<std::string> missing;
  for (const auto& r : regimes) {
    const auto it = spec.datasets.find(r);
    if (it == spec.datasets.end() || !std::filesystem::is_regular_file(it->second)) missing.push_back(r);
  }
  if (missing.empty()) return;
  std::string msg = "missing dataset for regime(s):";
  for (const auto& r : missing) msg += " " + r;
  throw std::invalid_argument(msg);
}

std::vector<AblationRow> run_ablation(const AblationSpec& spec, const std::vector<std::string>& regimes,
                                      const std::filesystem::path& out_dir, std::ostream* progress) {
  check_regimes(spec, regimes);
  auto variants = ablation_variants(spec.full);
  check_variants(variants);
  if (!spec.variants.empty()) {
    for (const auto& name : spec.variants) {
      if (std::none_of(variants.begin(), variants.end(), [&](const AblationVariant& v) { return v.name == name; })) {
        throw std::invalid_argument("unknown variant " + name);
      }
    }
    std::erase_if(variants, [&](const AblationVariant& v) {
      return std::find(spec.variants.begin(), spec.variants.end(), v.name) == spec.variants.end();
    });
  }
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  const auto suite = build_suite();
  std::vector<AblationRow> rows;
  for (const auto& regime : regimes) {
    const Dataset data = read_dataset(spec.datasets.at(regime));
    for (const auto& v : variants) {
      if (progress) *progress << "training " << v.name << " on " << regime << std::endl;
      std::ofstream log;
      TrainOptions options;
      if (!out_dir.empty()) {
        log.open(out_dir / (v.name + "_" + regime + ".log.jsonl"));
        options.log = &log;
      }
      const TrainConfig& cfg = v.config;
      const TrainResult result = train(cfg, data, [&](const PolicyNet& net) {
        return validation_score(net, cfg.validation_scenarios, cfg.validation_seeds);
      }, options);
      const PolicyNet net = make_policy(cfg.policy, result.best_params);
      if (!out_dir.empty()) save_policy(net, cfg, result.best_score, result.best_step, out_dir / (v.name + "_" + regime + ".ckpt"));
      const Evaluation e = evaluate(policy_controller(net), suite, spec.eval_seeds);
      rows.push_back({v.name, regime, e.metrics, result.best_score});
      if (progress) {
        *progress << "  SR " << e.metrics.SR << " CPM " << e.metrics.CPM << " NT " << e.metrics.NT
                  << " norm_reward " << e.metrics.norm_reward << std::endl;
      }
    }
  }
  return rows;
}

void write_ablation_csv(const std::vector<AblationRow>& rows, std::ostream& out) {
  out << "variant,regime,SR,CPM,NT,norm_reward,best_val_score\n";
  for (const auto& r : rows) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f", r.metrics.SR, r.metrics.CPM, r.metrics.NT,
                  r.metrics.norm_reward, r.best_score);
    out << r.variant << ',' << r.regime << ',' << buf << '\n';
  }
}

std::string regime_plot_svg(const std::vector<AblationRow>& rows, const std::vector<std::string>& regimes) {
  constexpr double W = 640, H = 400, left = 60, right = 160, top = 30, bottom = 50;
  const double plot_w = W - left - right;
  const double plot_h = H - top - bottom;
  const auto x_of = [&](std::size_t i) {
    return regimes.size() <= 1 ? left + plot_w / 2 : left + plot_w * static_cast<double>(i) / static_cast<double>(regimes.size() - 1);
  };
  const auto y_of = [&](double sr) { return top + plot_h * (1.0 - sr); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#000000"};

  std::vector<std::string> variants;
  for (const auto& r : rows) {
    if (std::find(variants.begin(), variants.end(), r.variant) == variants.end()) variants.push_back(r.variant);
  }

  std::ostringstream svg;
  char buf[256];
  std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\">\n", W, H);
  svg << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, top + plot_h, left + plot_w, top + plot_h);
  svg << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, top, left, top + plot_h);
  svg << buf;
  for (int t = 0; t <= 4; ++t) {
    const double sr = t / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%.2f</text>\n", left - 6, y_of(sr) + 4, sr);
    svg << buf;
  }
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">", x_of(i), top + plot_h + 18);
    svg << buf << regimes[i] << "</text>\n";
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"12\" text-anchor=\"middle\">data regime</text>\n", left + plot_w / 2, H - 10);
  svg << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"14\" y=\"%g\" font-size=\"12\" transform=\"rotate(-90 14 %g)\" text-anchor=\"middle\">success rate</text>\n", top + plot_h / 2, top + plot_h / 2);
  svg << buf;

  for (std::size_t v = 0; v < variants.size(); ++v) {
    const char* color = kColors[v % std::size(kColors)];
    std::string points;
    for (std::size_t i = 0; i < regimes.size(); ++i) {
      for (const auto& r : rows) {
        if (r.variant != variants[v] || r.regime != regimes[i]) continue;
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x_of(i), y_of(r.metrics.SR));
        points += buf;
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", x_of(i), y_of(r.metrics.SR), color);
        svg << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "<polyline class=\"curve\" fill=\"none\" stroke=\"%s\" stroke-width=\"2\" points=\"", color);
    svg << buf << points << "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" fill=\"%s\">", left + plot_w + 12, top + 14.0 * static_cast<double>(v + 1), color);
    svg << buf << variants[v] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace socnav
