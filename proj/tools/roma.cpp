// SPDX-License-Identifier: Apache-2.0
//
// romaxl — rotatable planar-array XL-MIMO LoS channel analysis for
// high-speed rail links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// `roma` — experiment runner. Subcommands: spacing-sweep, position-sweep,
// localization, rotation-opt. Exit code 0 on success, 2 on config errors.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "romaxl/romaxl.hpp"

namespace {

struct SubcommandArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed_override;
};

void add_common_options(CLI::App* sub, SubcommandArgs& args) {
  sub->add_option("--config", args.config_path, "key = value config file")->required();
  sub->add_option("--out", args.out_path, "output CSV path")->required();
  sub->add_option("--seed", args.seed_override, "override the config seed");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"ROMA XL-MIMO rail-link experiments"};
  app.require_subcommand(1);

  SubcommandArgs spacing, position, localization, rotation;
  CLI::App* spacing_cmd =
      app.add_subcommand("spacing-sweep", "capacity versus normalized antenna spacing");
  add_common_options(spacing_cmd, spacing);
  CLI::App* position_cmd = app.add_subcommand(
      "position-sweep", "capacity versus train position for fixed/rotated policies");
  add_common_options(position_cmd, position);
  CLI::App* localization_cmd =
      app.add_subcommand("localization", "median localization NMSE versus antenna count");
  add_common_options(localization_cmd, localization);
  CLI::App* rotation_cmd =
      app.add_subcommand("rotation-opt", "rotation-angle optimization trace");
  add_common_options(rotation_cmd, rotation);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const auto run = [&](const SubcommandArgs& args, auto&& runner) -> int {
    romaxl::ExperimentConfig cfg = romaxl::ExperimentConfig::load(args.config_path);
    if (args.seed_override) cfg.seed = *args.seed_override;
    std::ofstream out(args.out_path);
    if (!out) {
      std::cerr << "roma: cannot open output '" << args.out_path << "'\n";
      return 1;
    }
    runner(cfg, out);
    return 0;
  };

  try {
    if (spacing_cmd->parsed())
      return run(spacing, [](const auto& cfg, auto& out) { romaxl::run_spacing_sweep(cfg, out); });
    if (position_cmd->parsed())
      return run(position,
                 [](const auto& cfg, auto& out) { romaxl::run_position_sweep(cfg, out); });
    if (localization_cmd->parsed())
      return run(localization,
                 [](const auto& cfg, auto& out) { romaxl::run_localization(cfg, out); });
    if (rotation_cmd->parsed())
      return run(rotation, [](const auto& cfg, auto& out) {
        const romaxl::RotationOptSummary summary = romaxl::run_rotation_opt(cfg, out);
        std::cout << "best rank " << summary.fitness.rank << ", capacity "
                  << summary.fitness.capacity << " bits/s/Hz at angles (" << summary.angles[0]
                  << ", " << summary.angles[1] << ", " << summary.angles[2] << ", "
                  << summary.angles[3] << ")\n";
      });
  } catch (const romaxl::ConfigError& e) {
    std::cerr << "roma: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "roma: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#ifndef ROMA_CLI_NO_MAIN
int main(int argc, char** argv) { return run_cli(argc, argv); }
#endif
