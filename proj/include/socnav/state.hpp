#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "socnav/geometry.hpp"
#include "socnav/scenario.hpp"

namespace socnav {

inline constexpr int kPathNodes = 10;
inline constexpr double kPathNodeSpacing = 0.3;
inline constexpr int kHistoryLength = 10;

/// Local path segment in the robot frame.
struct PTState {
  std::array<Pose2, kPathNodes> nodes{};
  friend bool operator==(const PTState&, const PTState&) = default;
};

/// Position histories in the current robot frame, oldest first.
struct HAState {
  std::vector<Vec2> robot_history;
  std::vector<std::vector<Vec2>> humans;
  friend bool operator==(const HAState&, const HAState&) = default;
};

struct ModelState {
  PTState pt;
  HAState ha;
  friend bool operator==(const ModelState&, const ModelState&) = default;
};

struct Transition {
  ModelState state;
  /// (v_1, w_1, ..., v_H, w_H).
  std::vector<double> chunk;
  int path_index = 0;
  int episode_id = 0;
  double t = 0.0;
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct DatasetHeader {
  int format_version = 1;
  int H = 3;
  double w_max = 1.0;
  double v_max = 1.0;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::int64_t env_steps = 0;
  friend bool operator==(const DatasetHeader&, const DatasetHeader&) = default;
};

struct Dataset {
  DatasetHeader header;
  std::vector<Transition> transitions;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Model input for the current environment state.
ModelState build_state(const EnvState& env);

enum class OmegaBin : int { right = 0, straight = 1, left = 2 };

/// Bin of an angular velocity under three equal bins over [-w_max, w_max].
int omega_bin(double w, double w_max);

struct ChunkBins {
  std::vector<int> bins;
  int path_index = 0;
};

/// Bins of every w in an interleaved chunk and their base-3 path index, the
/// first action being most significant.
ChunkBins omega_bins(const std::vector<double>& chunk, double w_max);
/// Same, for a plain sequence of angular velocities.
ChunkBins omega_bins_of(const std::vector<double>& omegas, double w_max);

/// Base-3 digits of a path index, most significant first.
std::vector<int> path_digits(int path_index, int H);
int path_count(int H);

/// Mirrors the state about the robot's x axis and negates every angular
/// velocity label.
Transition flip_augment(const Transition& t, double w_max);
ModelState flip_state(const ModelState& s);
/// Originals followed by their mirror images, in the same order. Training
/// uses the same indexing without materializing the copies.
Dataset flip_augmented(const Dataset& d);

/// Rounds to 9 significant digits, the precision of the dataset file format.
double quantize9(double x);
void quantize(Transition& t);

}  // namespace socnav
