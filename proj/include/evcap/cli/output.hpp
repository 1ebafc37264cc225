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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace evcap::cli {

enum class Format { csv, json, both };

Format parse_format(std::string_view name);
std::string_view to_string(Format format);

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

// Provenance stamped into every output file.
struct RunInfo {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::json config;  // fully resolved
};

// CSV: '#' comment lines carrying the command, seed and resolved config,
// then the header and rows. Commas and newlines inside strings become ';'
// and ' ' so the file stays parseable without quoting.
void write_csv(std::ostream& out, const Table& table, const RunInfo& info);

// {"command", "seed", "config", "table", "columns", "rows": [{...}]}.
nlohmann::json to_json(const Table& table, const RunInfo& info);

// Writes each table to `dir` as <name>.csv and/or <name>.json. Returns the
// paths written.
std::vector<std::filesystem::path> write_tables(const std::filesystem::path& dir,
                                                const std::vector<Table>& tables,
                                                const RunInfo& info, Format format);

}  // namespace evcap::cli
