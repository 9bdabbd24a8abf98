#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pwlab/fields.hpp"
#include "pwlab/potential.hpp"
#include "json.hpp"

namespace pwlab::cli::detail {

using nlohmann::json;

GridSpec grid_of(const json& config);
ParticleModel model_of(const json& config);
Potential potential_of(const json& config);
WaveFunction state_of(const json& config, const GridSpec& grid, const ParticleModel& model);
std::vector<Point> starts_of(const json& config, const WaveFunction& psi0);

/// Outcome of one command: the report body and whether every tolerance held.
struct CommandOutcome {
  json report;
  bool pass = true;
};

/// Runs `command` with a resolved configuration, writing data files and plots
/// into `dir`.
CommandOutcome execute(const std::string& command, const json& config,
                       const std::filesystem::path& dir);

}  // namespace pwlab::cli::detail
