// Copyright 2026 The evcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <ostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "evcap/cli/commands.hpp"
#include "evcap/errors.hpp"

namespace evcap::cli {
namespace {

struct CommandEntry {
  const char* name;
  const char* block;
  const char* help;
};

constexpr CommandEntry kCommands[] = {
    {"analyze", "analytic", "Evaluate the analytic inconvenience model and sensitivity sweeps"},
    {"simulate", "simulation", "Run the mobility-and-charging simulation scenarios"},
    {"optimize", "optimization", "Find the cost-optimal battery capacity per driver"},
    {"whatif", "whatif", "Optimal capacity over a (density, power, policy) grid"},
    {"fit-prices", "prices", "Fit the capacity-price regression to a dataset"},
};

const CommandEntry& entry_for(const std::string& command) {
  for (const auto& c : kCommands) {
    if (command == c.name) return c;
  }
  throw ConfigError("unknown command '" + command + "'");
}

void setup_logging() {
  auto logger = spdlog::get("evcap");
  if (!logger) logger = spdlog::stderr_logger_st("evcap");
  logger->set_pattern("evcap [%l] %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("EVCAP_LOG"); env && *env) level = spdlog::level::from_str(env);
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const OversubscribedInfrastructure*>(&e) || dynamic_cast<const InfeasibleBattery*>(&e) ||
      dynamic_cast<const AllInfeasible*>(&e)) {
    return kExitInfeasible;
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const InvalidParameter*>(&e) || dynamic_cast<const EmptyDataset*>(&e) ||
      dynamic_cast<const DegenerateDesign*>(&e) || dynamic_cast<const DisconnectedNetwork*>(&e)) {
    return kExitConfig;
  }
  return kExitRuntime;
}

RunReport run_command(const RunOptions& options) {
  const auto& entry = entry_for(options.command);
  auto doc = ConfigDocument::load(options.config_path);
  auto root = doc.root();

  std::uint64_t seed = 0;
  if (options.seed) {
    seed = *options.seed;
    root.integer("seed", 0);  // validated, then overridden below
  } else {
    const auto s = root.integer("seed", 0);
    if (s < 0) throw ConfigError("'seed' must be >= 0");
    seed = static_cast<std::uint64_t>(s);
  }
  // Output location and format do not change results and are not echoed.
  // Read even when overridden so the keys count as known.
  const std::filesystem::path config_out = root.string("output_dir", "out");
  const auto config_format = parse_format(root.string("format", "both"));
  const auto out_dir = options.out_dir.value_or(config_out);
  const auto format = options.format.value_or(config_format);

  for (const auto& c : kCommands) {
    if (c.block != std::string_view(entry.block) && root.has(c.block)) {
      throw ConfigError("'" + std::string(c.block) + "' is not used by the '" + entry.name + "' command");
    }
  }
  if (!root.has(entry.block)) throw ConfigError("missing required field '" + std::string(entry.block) + "'");
  auto block = root.child(entry.block);

  CommandResult result;
  const std::string command = entry.name;
  if (command == "analyze") {
    result = cmd_analyze(block);
  } else if (command == "simulate") {
    result = cmd_simulate(block, seed);
  } else if (command == "optimize") {
    result = cmd_optimize(block);
  } else if (command == "whatif") {
    result = cmd_whatif(block);
  } else {
    result = cmd_fit_prices(block);
  }
  block.finish();
  root.finish();

  RunInfo info;
  info.command = command;
  info.seed = seed;
  info.config = doc.resolved();
  info.config["seed"] = seed;
  info.config.erase("output_dir");
  info.config.erase("format");

  RunReport report;
  report.exit_code = result.exit_code;
  report.written = write_tables(out_dir, result.tables, info, format);
  for (const auto& p : report.written) spdlog::debug("wrote {}", p.string());
  return report;
}

int main_entry(int argc, char** argv, std::ostream& err) {
  setup_logging();
  CLI::App app{"Battery capacity versus charging inconvenience: analysis, simulation and optimization"};
  app.require_subcommand(1);

  RunOptions options;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format;
  for (const auto& c : kCommands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", options.config_path, "JSON run config")->required();
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
    sub->add_option("--out", out_dir, "Output directory (overrides the config)");
    sub->add_option("--format", format, "csv, json or both (overrides the config)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cout, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (auto* sub : app.get_subcommands()) {
    options.command = sub->get_name();
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--out")) options.out_dir = out_dir;
    if (sub->count("--format")) options.format = parse_format(format);
  }

  try {
    const auto report = run_command(options);
    if (report.exit_code != kExitOk) err << "evcap: no feasible result\n";
    return report.exit_code;
  } catch (const std::exception& e) {
    err << "evcap: error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace evcap::cli
