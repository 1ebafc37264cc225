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

#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evcap/cli/config.hpp"
#include "evcap/cli/output.hpp"

namespace evcap::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;      // bad config, input file or parameter
inline constexpr int kExitInfeasible = 3;  // model has no feasible answer
inline constexpr int kExitRuntime = 4;     // anything else

int exit_code_for(const std::exception& e);

struct CommandResult {
  std::vector<Table> tables;
  int exit_code = kExitOk;
};

// One function per subcommand. `block` is the command's section of the
// config; the caller checks it for unknown keys afterwards.
CommandResult cmd_analyze(Section& block);
CommandResult cmd_simulate(Section& block, std::uint64_t seed);
CommandResult cmd_optimize(Section& block);
CommandResult cmd_whatif(Section& block);
CommandResult cmd_fit_prices(Section& block);

struct RunOptions {
  std::string command;  // analyze | simulate | optimize | whatif | fit-prices
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;              // overrides config "seed"
  std::optional<std::filesystem::path> out_dir;   // overrides config "output_dir"
  std::optional<Format> format;                   // overrides config "format"
};

struct RunReport {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> written;
};

// Loads the config, runs the command and writes its tables. Errors
// propagate as exceptions.
RunReport run_command(const RunOptions& options);

// Process entry: argument parsing, EVCAP_LOG handling, error reporting on
// `err`, exit-code mapping.
int main_entry(int argc, char** argv, std::ostream& err);

}  // namespace evcap::cli
