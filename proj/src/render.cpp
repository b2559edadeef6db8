#include "socnav/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace socnav {
namespace {

struct View {
  double min_x, min_y, scale, height;
  double sx(double x) const { return (x - min_x) * scale; }
  double sy(double y) const { return height - (y - min_y) * scale; }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace

std::vector<std::string> render_episode(const EpisodeLog& log, const EnvConfig& env_config) {
  const auto path = make_path(log.spec.path_kind);
  double lo_x = 1e9, lo_y = 1e9, hi_x = -1e9, hi_y = -1e9;
  auto grow = [&](Vec2 p) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  };
  for (const auto& n : path->nodes()) grow(n.position());
  grow(log.start.position());
  for (const auto& s : log.steps) grow(s.robot.position());
  lo_x -= 2.0;
  lo_y -= 2.0;
  hi_x += 2.0;
  hi_y += 2.0;
  constexpr double kPixelsPerMeter = 40.0;
  const View view{lo_x, lo_y, kPixelsPerMeter, (hi_y - lo_y) * kPixelsPerMeter};
  const double width = (hi_x - lo_x) * kPixelsPerMeter;

  std::string path_points;
  for (const auto& n : path->nodes()) path_points += fmt("%.2f,%.2f ", view.sx(n.x), view.sy(n.y));

  const double robot_r = env_config.robot_radius * kPixelsPerMeter;
  const double human_r = env_config.crowd.human_radius * kPixelsPerMeter;

  std::vector<std::string> frames;
  frames.reserve(log.steps.size());
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const StepLog& s = log.steps[i];
    std::ostringstream svg;
    svg << fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n", width, view.height);
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (s.collision) {
      svg << fmt("<rect class=\"collision\" x=\"2\" y=\"2\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" stroke=\"red\" stroke-width=\"6\"/>\n",
                 width - 4, view.height - 4);
    }
    svg << "<polyline class=\"path\" fill=\"none\" stroke=\"#888\" stroke-width=\"2\" points=\"" << path_points << "\"/>\n";

    for (std::size_t h = 0; h < s.humans.size(); ++h) {
      std::string trail;
      const std::size_t first = i >= 9 ? i - 9 : 0;
      for (std::size_t k = first; k <= i; ++k) {
        const auto& humans = log.steps[k].humans;
        if (h < humans.size()) trail += fmt("%.2f,%.2f ", view.sx(humans[h].x), view.sy(humans[h].y));
      }
      svg << "<polyline class=\"trail\" fill=\"none\" stroke=\"#6fa8dc\" stroke-width=\"1.5\" points=\"" << trail << "\"/>\n";
      svg << fmt("<circle class=\"human\" cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"#3d85c6\"/>\n", view.sx(s.humans[h].x),
                 view.sy(s.humans[h].y), human_r);
    }

    std::string plan = fmt("%.2f,%.2f ", view.sx(s.robot.x), view.sy(s.robot.y));
    Pose2 p = s.robot;
    for (const auto& a : s.plan) {
      p = unicycle_step(p, a, env_config.dt);
      plan += fmt("%.2f,%.2f ", view.sx(p.x), view.sy(p.y));
    }
    svg << "<polyline class=\"plan\" fill=\"none\" stroke=\"#e69138\" stroke-width=\"2\" points=\"" << plan << "\"/>\n";
    svg << fmt("<circle class=\"robot\" cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"#f1c232\" stroke=\"black\"/>\n",
               view.sx(s.robot.x), view.sy(s.robot.y), robot_r);
    svg << fmt("<line class=\"robot\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\" stroke-width=\"2\"/>\n",
               view.sx(s.robot.x), view.sy(s.robot.y), view.sx(s.robot.x + 0.5 * std::cos(s.robot.theta)),
               view.sy(s.robot.y + 0.5 * std::sin(s.robot.theta)));
    svg << fmt("<text x=\"8\" y=\"18\" font-size=\"13\">t = %.2f s</text>\n", s.t);
    svg << "</svg>\n";
    frames.push_back(svg.str());
  }
  return frames;
}

std::size_t write_frames(const EpisodeLog& log, const std::filesystem::path& dir, const EnvConfig& env_config) {
  std::filesystem::create_directories(dir);
  const auto frames = render_episode(log, env_config);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto file = dir / fmt("frame_%05zu.svg", i);
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << frames[i];
  }
  return frames.size();
}

}  // namespace socnav
