#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "socnav/rng.hpp"
#include "socnav/tensor.hpp"

namespace socnav::nn {

enum class Init { xavier, zeros };

struct ParamEntry {
  std::string name;
  Init init = Init::xavier;
  Tensor tensor;
  Matrix m;  // first moment
  Matrix v;  // second moment
};

/// Named parameters plus Adam state. Insertion order is the canonical order
/// for initialization, serialization and perturbation.
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;
  ParamStore(ParamStore&&) = default;
  ParamStore& operator=(ParamStore&&) = default;

  /// Registers a zero-valued parameter. Throws on duplicate names.
  Tensor add(const std::string& name, Eigen::Index rows, Eigen::Index cols, Init init);
  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  /// Draws every parameter from its initializer: uniform in
  /// +-sqrt(6 / (fan_in + fan_out)) for `xavier`, zero for `zeros`.
  void initialize(Rng& rng);
  /// Values a fresh initialization would produce, without touching the store.
  std::vector<Matrix> sample_initial(Rng& rng) const;

  void zero_grad();
  void reset_moments();

  std::vector<ParamEntry>& entries() { return entries_; }
  const std::vector<ParamEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t scalar_count() const;

  std::vector<Matrix> snapshot() const;
  void restore(const std::vector<Matrix>& values);

  /// Bias-correction counter; reset together with the moments.
  std::int64_t adam_steps = 0;

 private:
  std::vector<ParamEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

enum class OptimizerKind { adam, adamw };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adamw;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 5e-3;
};

/// One Adam/AdamW update from the accumulated gradients. `adam` folds the
/// decay into the gradient; `adamw` shrinks the weights separately.
void optimizer_step(ParamStore& store, const OptimizerConfig& cfg);

/// Checkpoint: a text manifest at `path` naming every array with its shape
/// and byte offset, and a little-endian float64 payload at `path` + ".bin".
/// `metadata` is stored verbatim as key/value lines.
void save_checkpoint(const ParamStore& store, const std::map<std::string, std::string>& metadata,
                     const std::filesystem::path& path);
/// Loads values, moments and step counter into a store with the same layout.
/// Returns the metadata.
std::map<std::string, std::string> load_checkpoint(ParamStore& store,
                                                   const std::filesystem::path& path);

}  // namespace socnav::nn
