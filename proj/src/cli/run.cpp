#include <fftw3.h>
#include <omp.h>

#include <chrono>
#include <ctime>
#include <iostream>

#include "internal.hpp"
#include "pwlab/cli.hpp"
#include "pwlab/error.hpp"
#include "pwlab/io.hpp"

namespace pwlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now(const char* format) {
  const std::time_t now = std::time(nullptr);
  char buf[40];
  std::strftime(buf, sizeof buf, format, std::gmtime(&now));
  return buf;
}

fs::path fresh_directory(const fs::path& root, const std::string& command) {
  const std::string base = command + "-" + utc_now("%Y%m%dT%H%M%SZ");
  fs::path dir = root / base;
  for (int n = 1; fs::exists(dir); ++n) dir = root / (base + "-" + std::to_string(n));
  return dir;
}

json load_config(const Invocation& inv) {
  json raw = json::object();
  if (!inv.config_path.empty()) {
    try {
      raw = io::read_json(inv.config_path);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigInvalid, e.what());
    }
  }
  for (const auto& o : inv.overrides) apply_override(raw, o);
  if (inv.seed) raw["seed"] = *inv.seed;
  return resolve_config(inv.command, raw);
}

json error_report(const Error& e) {
  json j{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (e.time()) j["time"] = *e.time();
  if (e.location()) j["location"] = io::point_json(*e.location(), e.dim());
  return j;
}

}  // namespace

RunResult run(const Invocation& inv) {
  RunResult result;
  json config;
  try {
    config = load_config(inv);
  } catch (const Error& e) {
    std::cerr << "pwlab: invalid configuration: " << e.what() << '\n';
    result.exit_code = 2;
    result.report = {{"command", inv.command}, {"error", error_report(e)}};
    return result;
  }
  if (inv.threads) omp_set_num_threads(*inv.threads);

  result.output_dir = inv.out_dir ? *inv.out_dir : fresh_directory(inv.out_root, inv.command);
  fs::create_directories(result.output_dir);

  const std::string started = utc_now("%Y-%m-%dT%H:%M:%SZ");
  const auto clock = std::chrono::steady_clock::now();
  json report{{"command", inv.command}, {"version", kVersion}, {"config", config}};
  try {
    auto outcome = detail::execute(inv.command, config, result.output_dir);
    report["pass"] = outcome.pass;
    report["results"] = std::move(outcome.report);
    result.exit_code = outcome.pass ? 0 : 1;
  } catch (const Error& e) {
    report["pass"] = false;
    report["error"] = error_report(e);
    result.exit_code = 1;
    std::cerr << "pwlab: " << e.what() << '\n';
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();

  io::write_json(result.output_dir / "report.json", report);
  io::write_json(result.output_dir / "manifest.json",
                 {{"pwlab_version", kVersion},
                  {"fftw_version", std::string(fftw_version)},
                  {"compiler", std::string(__VERSION__)},
                  {"openmp", _OPENMP},
                  {"threads", omp_get_max_threads()},
                  {"command", inv.command},
                  {"resolved_config", config},
                  {"started_utc", started},
                  {"wall_clock_seconds", wall}});
  result.report = std::move(report);
  return result;
}

}  // namespace pwlab::cli
