#include "socnav/state.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace socnav {

ModelState build_state(const EnvState& env) {
  if (env.robot_history.size() == 0) throw std::invalid_argument("empty robot history");
  ModelState s;
  const auto nodes = local_path_segment_from(*env.path, env.robot, env.progress, kPathNodes,
                                             kPathNodeSpacing);
  for (int i = 0; i < kPathNodes; ++i) s.pt.nodes[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(i)];

  s.ha.robot_history.reserve(env.robot_history.size());
  for (std::size_t i = 0; i < env.robot_history.size(); ++i) {
    s.ha.robot_history.push_back(to_robot_frame(env.robot_history.at(i), env.robot));
  }
  const double sensing_sq = env.config.sensing_radius * env.config.sensing_radius;
  for (std::size_t h = 0; h < env.humans.size(); ++h) {
    if (norm_sq(env.humans[h].position - env.robot.position()) > sensing_sq) continue;
    const auto& hist = env.human_histories[h];
    std::vector<Vec2> track;
    track.reserve(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) track.push_back(to_robot_frame(hist.at(i), env.robot));
    s.ha.humans.push_back(std::move(track));
  }
  return s;
}

int omega_bin(double w, double w_max) {
  const double edge = w_max / 3.0;
  if (w < -edge) return 0;
  if (w > edge) return 2;
  return 1;
}

ChunkBins omega_bins_of(const std::vector<double>& omegas, double w_max) {
  ChunkBins out;
  for (double w : omegas) {
    const int b = omega_bin(w, w_max);
    out.bins.push_back(b);
    out.path_index = out.path_index * 3 + b;
  }
  return out;
}

ChunkBins omega_bins(const std::vector<double>& chunk, double w_max) {
  std::vector<double> omegas;
  for (std::size_t i = 1; i < chunk.size(); i += 2) omegas.push_back(chunk[i]);
  return omega_bins_of(omegas, w_max);
}

int path_count(int H) {
  int n = 1;
  for (int i = 0; i < H; ++i) n *= 3;
  return n;
}

std::vector<int> path_digits(int path_index, int H) {
  std::vector<int> digits(static_cast<std::size_t>(H));
  for (int t = H - 1; t >= 0; --t) {
    digits[static_cast<std::size_t>(t)] = path_index % 3;
    path_index /= 3;
  }
  return digits;
}

ModelState flip_state(const ModelState& s) {
  ModelState f = s;
  for (auto& n : f.pt.nodes) {
    n.y = -n.y;
    n.theta = -n.theta;
  }
  // theta = pi has no mirror inside (-pi, pi]; it maps to itself.
  for (auto& n : f.pt.nodes) n.theta = wrap_angle(n.theta);
  for (auto& p : f.ha.robot_history) p.y = -p.y;
  for (auto& track : f.ha.humans) {
    for (auto& p : track) p.y = -p.y;
  }
  return f;
}

Transition flip_augment(const Transition& t, double w_max) {
  Transition f = t;
  f.state = flip_state(t.state);
  for (std::size_t i = 1; i < f.chunk.size(); i += 2) f.chunk[i] = -f.chunk[i];
  f.path_index = omega_bins(f.chunk, w_max).path_index;
  return f;
}

double quantize9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

void quantize(Transition& t) {
  for (auto& n : t.state.pt.nodes) {
    n.x = quantize9(n.x);
    n.y = quantize9(n.y);
    n.theta = quantize9(n.theta);
  }
  for (auto& p : t.state.ha.robot_history) p = {quantize9(p.x), quantize9(p.y)};
  for (auto& track : t.state.ha.humans) {
    for (auto& p : track) p = {quantize9(p.x), quantize9(p.y)};
  }
  for (auto& c : t.chunk) c = quantize9(c);
  t.t = quantize9(t.t);
}

Dataset flip_augmented(const Dataset& d) {
  Dataset out;
  out.header = d.header;
  out.transitions.reserve(2 * d.transitions.size());
  out.transitions = d.transitions;
  for (const Transition& t : d.transitions) out.transitions.push_back(flip_augment(t, d.header.w_max));
  return out;
}

}  // namespace socnav
