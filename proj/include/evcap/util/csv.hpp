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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace evcap::util {

struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

// Minimal reader for the unquoted, comma-separated files used by the tool.
// Lines starting with '#' and blank lines are skipped. When
// `expected_header` is non-empty the header must match it exactly.
CsvTable read_csv(std::istream& in, const std::vector<std::string>& expected_header,
                  std::string_view source_name);
CsvTable read_csv_file(const std::filesystem::path& path,
                       const std::vector<std::string>& expected_header);

double parse_double(const CsvRow& row, std::size_t column, std::string_view source_name);
long long parse_int(const CsvRow& row, std::size_t column, std::string_view source_name);

// Shortest round-trip decimal representation; byte-stable across runs.
std::string format_double(double value);

}  // namespace evcap::util
