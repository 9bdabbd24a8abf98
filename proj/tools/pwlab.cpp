#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "pwlab/cli.hpp"

namespace {

const std::map<std::string, std::string> kDescriptions = {
    {"evolve", "split-step evolution with norm and analytic checks"},
    {"trajectories", "guidance trajectories through an evolved state"},
    {"second-order", "quantum-potential trajectories next to guidance ones"},
    {"boost-audit", "trajectory gap between a frame and its boosted image"},
    {"frame-audit", "evolve-then-transform against transform-then-evolve"},
    {"accel-audit", "classical motion in a uniformly accelerated frame"},
    {"equivalence-audit", "first-order against second-order dynamics"},
    {"continuity-audit", "continuity residual and its dt convergence"},
    {"ensemble", "transport an equilibrium ensemble and measure KS"},
    {"mass-audit", "KS with correct and rescaled guidance masses"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pilot-wave numerical laboratory"};
  app.set_version_flag("--version", pwlab::cli::kVersion);
  app.require_subcommand(1);

  pwlab::cli::Invocation inv;
  std::string config, out;
  int threads = 0;
  long long seed = -1;
  for (const auto& name : pwlab::cli::command_names()) {
    auto* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", inv.overrides, "Override a dotted config key: key=value");
    sub->add_option("--out", out, "Output directory (default: timestamped under runs/)");
    sub->add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Random seed")->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);

  inv.command = app.get_subcommands().front()->get_name();
  inv.config_path = config;
  if (!out.empty()) inv.out_dir = out;
  if (threads > 0) inv.threads = threads;
  if (seed >= 0) inv.seed = seed;

  const auto result = pwlab::cli::run(inv);
  if (!result.output_dir.empty()) {
    std::cout << result.output_dir.string() << '\n';
    std::cout << (result.exit_code == 0 ? "pass" : "fail") << '\n';
  }
  return result.exit_code;
}
