#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "socnav/evaluate.hpp"
#include "socnav/trainer.hpp"

namespace socnav {

struct AblationVariant {
  std::string name;
  TrainConfig config;
};

/// The all-ingredients config with the seven ingredients switched on and the
/// rest of `base` kept: flip augmentation, H = 3, hybrid head, perturbation,
/// reset-to-best, d_pt = 16, AdamW with weight decay 5e-3.
TrainConfig full_config(const TrainConfig& base = {});
/// Every ingredient off: no flip, H = 1, continuous head, no perturbation,
/// no reset, d_pt = 128 (capped at d_ha), Adam without weight decay.
TrainConfig base_config(const TrainConfig& full);

/// base, full, then one variant per ingredient with exactly that ingredient
/// changed from `full`.
std::vector<AblationVariant> ablation_variants(const TrainConfig& full);

/// Ingredient axes on which two configs differ. A discrete head implies
/// H = 1, so H is not counted separately when either side uses it.
std::vector<std::string> differing_axes(const TrainConfig& a, const TrainConfig& b);

/// Throws std::logic_error unless every minus-one variant differs from full on
/// exactly one axis and base differs on all of them.
void check_variants(const std::vector<AblationVariant>& variants);

struct AblationSpec {
  TrainConfig full;
  /// Subset of variant names; empty means all.
  std::vector<std::string> variants;
  /// Regime name -> dataset file.
  std::map<std::string, std::filesystem::path> datasets;
  int eval_seeds = 4;
};

/// JSON: {"config": {TrainConfig keys}, "variants": [...], "datasets": {regime:
/// path}, "eval_seeds": k}. Relative dataset paths resolve against the spec
/// file's directory.
AblationSpec load_ablation_spec(const std::filesystem::path& path);

struct AblationRow {
  std::string variant;
  std::string regime;
  Metrics metrics;
  double best_score = 0.0;
};

/// Throws std::invalid_argument naming every requested regime without a
/// readable dataset.
void check_regimes(const AblationSpec& spec, const std::vector<std::string>& regimes);

/// Trains and evaluates every selected variant on every regime. Checkpoints
/// and training logs go to `out_dir` when it is non-empty.
std::vector<AblationRow> run_ablation(const AblationSpec& spec, const std::vector<std::string>& regimes,
                                      const std::filesystem::path& out_dir, std::ostream* progress = nullptr);

void write_ablation_csv(const std::vector<AblationRow>& rows, std::ostream& out);

/// Line plot of success rate against data regime, one curve per variant.
std::string regime_plot_svg(const std::vector<AblationRow>& rows, const std::vector<std::string>& regimes);

}  // namespace socnav
