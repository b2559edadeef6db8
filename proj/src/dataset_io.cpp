#include "socnav/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace socnav {
namespace {

using nlohmann::json;

void put(std::string& s, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  s += buf;
}

void put_xy(std::string& s, Vec2 p) {
  s += '[';
  put(s, p.x);
  s += ',';
  put(s, p.y);
  s += ']';
}

std::string transition_line(const Transition& t) {
  std::string s;
  s.reserve(1024);
  s += "{\"pt\":[";
  for (std::size_t i = 0; i < t.state.pt.nodes.size(); ++i) {
    const auto& n = t.state.pt.nodes[i];
    if (i) s += ',';
    s += '[';
    put(s, n.x);
    s += ',';
    put(s, n.y);
    s += ',';
    put(s, n.theta);
    s += ']';
  }
  s += "],\"robot_hist\":[";
  for (std::size_t i = 0; i < t.state.ha.robot_history.size(); ++i) {
    if (i) s += ',';
    put_xy(s, t.state.ha.robot_history[i]);
  }
  s += "],\"humans\":[";
  for (std::size_t h = 0; h < t.state.ha.humans.size(); ++h) {
    const auto& track = t.state.ha.humans[h];
    if (h) s += ',';
    s += '[' + std::to_string(track.size()) + ",[";
    for (int i = 0; i < kHistoryLength; ++i) {
      if (i) s += ',';
      put_xy(s, static_cast<std::size_t>(i) < track.size() ? track[static_cast<std::size_t>(i)] : Vec2{});
    }
    s += "]]";
  }
  s += "],\"chunk\":[";
  for (std::size_t i = 0; i < t.chunk.size(); ++i) {
    if (i) s += ',';
    put(s, t.chunk[i]);
  }
  s += "],\"path_index\":" + std::to_string(t.path_index);
  s += ",\"episode_id\":" + std::to_string(t.episode_id);
  s += ",\"t\":";
  put(s, t.t);
  s += '}';
  return s;
}

Vec2 read_xy(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("expected [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Transition parse_transition(const json& j, int H, double w_max) {
  Transition t;
  const auto& pt = j.at("pt");
  if (!pt.is_array() || pt.size() != static_cast<std::size_t>(kPathNodes)) {
    throw std::runtime_error("pt must hold 10 nodes");
  }
  for (std::size_t i = 0; i < pt.size(); ++i) {
    const auto& n = pt[i];
    if (!n.is_array() || n.size() != 3) throw std::runtime_error("pt node must be [x, y, theta]");
    t.state.pt.nodes[i] = {n[0].get<double>(), n[1].get<double>(), n[2].get<double>()};
  }
  const auto& rh = j.at("robot_hist");
  if (!rh.is_array() || rh.empty() || rh.size() > static_cast<std::size_t>(kHistoryLength)) {
    throw std::runtime_error("robot_hist length must be in [1, 10]");
  }
  for (const auto& p : rh) t.state.ha.robot_history.push_back(read_xy(p));
  for (const auto& h : j.at("humans")) {
    if (!h.is_array() || h.size() != 2) throw std::runtime_error("human must be [len, samples]");
    const int len = h[0].get<int>();
    const auto& samples = h[1];
    if (len < 1 || len > kHistoryLength) throw std::runtime_error("human len must be in [1, 10]");
    if (!samples.is_array() || samples.size() != static_cast<std::size_t>(kHistoryLength)) {
      throw std::runtime_error("human samples must be zero-padded to 10");
    }
    std::vector<Vec2> track;
    for (int i = 0; i < len; ++i) track.push_back(read_xy(samples[static_cast<std::size_t>(i)]));
    t.state.ha.humans.push_back(std::move(track));
  }
  t.chunk = j.at("chunk").get<std::vector<double>>();
  if (t.chunk.size() != static_cast<std::size_t>(2 * H)) throw std::runtime_error("chunk length must be 2H");
  t.path_index = j.at("path_index").get<int>();
  if (t.path_index != omega_bins(t.chunk, w_max).path_index) {
    throw std::runtime_error("path_index does not match chunk bins");
  }
  t.episode_id = j.at("episode_id").get<int>();
  t.t = j.at("t").get<double>();
  return t;
}

}  // namespace

void write_dataset(const Dataset& d, std::ostream& out) {
  json header = {{"format_version", d.header.format_version},
                 {"H", d.header.H},
                 {"w_max", d.header.w_max},
                 {"v_max", d.header.v_max},
                 {"config_hash", d.header.config_hash},
                 {"seed", d.header.seed},
                 {"env_steps", d.header.env_steps}};
  out << header.dump() << '\n';
  for (const auto& t : d.transitions) out << transition_line(t) << '\n';
}

void write_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dataset(d, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset read_dataset(std::istream& in) {
  Dataset d;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DatasetFormatError(1, "missing header");
  ++line_no;
  try {
    const json h = json::parse(line);
    d.header.format_version = h.at("format_version").get<int>();
    if (d.header.format_version != 1) {
      throw DatasetFormatError(line_no, "unsupported format_version " +
                                            std::to_string(d.header.format_version) +
                                            " (expected 1)");
    }
    d.header.H = h.at("H").get<int>();
    d.header.w_max = h.at("w_max").get<double>();
    d.header.v_max = h.at("v_max").get<double>();
    d.header.config_hash = h.at("config_hash").get<std::string>();
    d.header.seed = h.value("seed", std::uint64_t{0});
    d.header.env_steps = h.value("env_steps", std::int64_t{0});
  } catch (const DatasetFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw DatasetFormatError(line_no, std::string("bad header: ") + e.what());
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw DatasetFormatError(line_no, "empty record");
    }
    try {
      d.transitions.push_back(parse_transition(json::parse(line), d.header.H, d.header.w_max));
    } catch (const std::exception& e) {
      throw DatasetFormatError(line_no, e.what());
    }
  }
  return d;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  return read_dataset(in);
}

}  // namespace socnav
