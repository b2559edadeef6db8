#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "socnav/evaluate.hpp"

namespace socnav {

/// One SVG document per logged step: reference path, robot with its planned
/// chunk, humans with their recent trails, and a red border on steps with a
/// new collision. Elements carry the classes path, robot, plan, human, trail
/// and collision.
std::vector<std::string> render_episode(const EpisodeLog& log, const EnvConfig& env_config = {});

/// Writes frame_00000.svg, frame_00001.svg, ... and returns the frame count.
std::size_t write_frames(const EpisodeLog& log, const std::filesystem::path& dir,
                         const EnvConfig& env_config = {});

}  // namespace socnav
