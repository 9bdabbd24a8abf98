#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pwlab::cli {

inline constexpr const char* kVersion = "0.1.0";

struct Invocation {
  std::string command;
  std::filesystem::path config_path;
  std::vector<std::string> overrides;  // key=value with dotted keys
  std::filesystem::path out_root = "runs";
  std::optional<int> threads;
  std::optional<long long> seed;
  /// Use exactly this directory instead of a timestamped one under out_root.
  std::optional<std::filesystem::path> out_dir;
};

struct RunResult {
  int exit_code = 0;
  std::filesystem::path output_dir;
  nlohmann::json report;
};

const std::vector<std::string>& command_names();

/// Exit codes: 0 all tolerances pass, 1 tolerance failure or module error,
/// 2 invalid configuration.
RunResult run(const Invocation& inv);

/// Applies a dotted-path override ("a.b.c=value"). The value is parsed as
/// JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Fills defaults and checks the configuration for `command`. Throws
/// Error(ConfigInvalid).
nlohmann::json resolve_config(const std::string& command, const nlohmann::json& raw);

}  // namespace pwlab::cli
